//! Real trigonometric eigenbasis of the Hodge Laplacian on the flat torus
//! `T^d = (R / 2πZ)^d`.
//!
//! A basis form is `N · φ(k·x) dx_S` where `φ ∈ {cos, sin}`, `k ∈ Z^d` is a
//! canonical wave vector and `S` a set of coordinate covectors. `N` makes the
//! form unit-norm for the flat `L²` inner product, so every eigenvalue
//! `|k|²` eigenspace has an orthonormal basis of such forms.

use std::cmp::Ordering;
use std::collections::{BTreeSet, HashMap};
use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use smallvec::SmallVec;

use crate::error::{Error, Result};

/// Largest supported torus dimension.
pub const MAX_DIM: usize = 6;

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    if (2..=MAX_DIM).contains(&dim) {
        Ok(())
    } else {
        Err(Error::InvalidManifold(dim))
    }
}

/// `(2π)^d`, the volume of the torus.
pub fn torus_volume(dim: usize) -> f64 {
    (2.0 * PI).powi(dim as i32)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Phase {
    Cos,
    Sin,
}

impl Phase {
    pub fn flipped(self) -> Phase {
        match self {
            Phase::Cos => Phase::Sin,
            Phase::Sin => Phase::Cos,
        }
    }
}

/// Strictly increasing subset of `{1, …, d}` stored as a bitmask
/// (bit `i` is the covector `dx_{i+1}`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct CovectorSet(u8);

impl CovectorSet {
    pub const EMPTY: CovectorSet = CovectorSet(0);

    pub fn from_bits(bits: u8) -> CovectorSet {
        CovectorSet(bits)
    }

    /// Builds the set from one-based coordinate indices.
    pub fn from_indices(indices: &[usize]) -> Option<CovectorSet> {
        let mut bits = 0u8;
        for &i in indices {
            if i == 0 || i > MAX_DIM || bits & (1 << (i - 1)) != 0 {
                return None;
            }
            bits |= 1 << (i - 1);
        }
        Some(CovectorSet(bits))
    }

    pub fn full(dim: usize) -> CovectorSet {
        CovectorSet(((1u16 << dim) - 1) as u8)
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    pub fn degree(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, axis: usize) -> bool {
        self.0 & (1 << axis) != 0
    }

    /// Zero-based axes in increasing order.
    pub fn axes(self) -> impl Iterator<Item = usize> {
        (0..MAX_DIM).filter(move |&i| self.0 & (1 << i) != 0)
    }

    /// One-based indices, as written `dx_1 ∧ dx_3`.
    pub fn indices(self) -> Vec<usize> {
        self.axes().map(|i| i + 1).collect()
    }

    pub fn complement(self, dim: usize) -> CovectorSet {
        CovectorSet(!self.0 & CovectorSet::full(dim).0)
    }

    /// Sign and result of `dx_self ∧ dx_other`; `None` if they share a covector.
    pub fn wedge(self, other: CovectorSet) -> Option<(f64, CovectorSet)> {
        if self.0 & other.0 != 0 {
            return None;
        }
        // Each pair (s in self, t in other) with s > t is one transposition.
        let mut swaps = 0u32;
        for t in other.axes() {
            swaps += (self.0 >> (t + 1)).count_ones();
        }
        let sign = if swaps.is_multiple_of(2) { 1.0 } else { -1.0 };
        Some((sign, CovectorSet(self.0 | other.0)))
    }
}

impl Ord for CovectorSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.axes().cmp(other.axes()))
    }
}

impl PartialOrd for CovectorSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical Fourier mode `φ(k·x)`: `k = 0` only with `cos`, otherwise the
/// first nonzero entry of `k` is positive.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FourierMode {
    k: [i16; MAX_DIM],
    dim: u8,
    phase: Phase,
}

impl FourierMode {
    pub fn constant(dim: usize) -> FourierMode {
        FourierMode {
            k: [0; MAX_DIM],
            dim: dim as u8,
            phase: Phase::Cos,
        }
    }

    /// Canonicalizes `φ(k·x)`. Returns the canonical mode and the sign with
    /// which it represents the input, or `None` when the function vanishes
    /// identically (`sin(0)`).
    pub fn canonical(k: &[i16], phase: Phase) -> Option<(f64, FourierMode)> {
        let dim = k.len();
        assert!(dim <= MAX_DIM, "dimension {dim} exceeds {MAX_DIM}");
        let mut arr = [0i16; MAX_DIM];
        arr[..dim].copy_from_slice(k);
        let first = arr[..dim].iter().copied().find(|&v| v != 0);
        match first {
            None => match phase {
                Phase::Cos => Some((1.0, FourierMode::constant(dim))),
                Phase::Sin => None,
            },
            Some(v) if v > 0 => Some((
                1.0,
                FourierMode {
                    k: arr,
                    dim: dim as u8,
                    phase,
                },
            )),
            Some(_) => {
                for x in arr.iter_mut() {
                    *x = -*x;
                }
                let sign = match phase {
                    Phase::Cos => 1.0,
                    Phase::Sin => -1.0,
                };
                Some((
                    sign,
                    FourierMode {
                        k: arr,
                        dim: dim as u8,
                        phase,
                    },
                ))
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.dim as usize
    }

    pub fn wave_vector(&self) -> &[i16] {
        &self.k[..self.dim as usize]
    }

    pub fn phase(&self) -> Phase {
        self.phase
    }

    pub fn is_constant(&self) -> bool {
        self.k.iter().all(|&v| v == 0)
    }

    /// `λ(k) = |k|²`.
    pub fn eigenvalue(&self) -> u32 {
        self.k.iter().map(|&v| (v as i32 * v as i32) as u32).sum()
    }

    /// Squared normalization in the unit-volume frame: 1 for the constant
    /// mode, 2 otherwise (mean of cos² is ½).
    fn unit_norm_sq(&self) -> u8 {
        if self.is_constant() {
            1
        } else {
            2
        }
    }

    /// Pointwise value of `φ(k·x)`.
    pub fn eval(&self, x: &[f64]) -> f64 {
        let arg: f64 = self.wave_vector().iter().zip(x).map(|(&k, &xi)| k as f64 * xi).sum();
        match self.phase {
            Phase::Cos => arg.cos(),
            Phase::Sin => arg.sin(),
        }
    }
}

impl Ord for FourierMode {
    fn cmp(&self, other: &Self) -> Ordering {
        self.eigenvalue()
            .cmp(&other.eigenvalue())
            .then_with(|| self.k.cmp(&other.k))
            .then_with(|| self.phase.cmp(&other.phase))
    }
}

impl PartialOrd for FourierMode {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Unit-norm eigenform `N · φ(k·x) dx_S` of the Hodge Laplacian.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BasisForm {
    mode: FourierMode,
    covectors: CovectorSet,
}

impl BasisForm {
    pub fn new(mode: FourierMode, covectors: CovectorSet) -> BasisForm {
        debug_assert!((covectors.bits() as u16) < (1u16 << mode.dim()));
        BasisForm { mode, covectors }
    }

    pub fn mode(&self) -> FourierMode {
        self.mode
    }

    pub fn covectors(&self) -> CovectorSet {
        self.covectors
    }

    pub fn dim(&self) -> usize {
        self.mode.dim()
    }

    pub fn degree(&self) -> usize {
        self.covectors.degree()
    }

    /// Z/2 parity, `|covectors| mod 2`.
    pub fn parity(&self) -> usize {
        self.degree() % 2
    }

    pub fn eigenvalue(&self) -> u32 {
        self.mode.eigenvalue()
    }

    /// The scalar `N` with `N · φ(k·x) dx_S` unit-norm under `⟨,⟩`.
    pub fn normalization(&self) -> f64 {
        let nu = if self.mode.is_constant() { 1.0 } else { SQRT_2 };
        nu / torus_volume(self.dim()).sqrt()
    }

    /// `⋆e = sign · e'` for the flat metric with the standard orientation.
    pub fn star(&self) -> (f64, BasisForm) {
        let dim = self.dim();
        let comp = self.covectors.complement(dim);
        let (sign, _) = self
            .covectors
            .wedge(comp)
            .expect("a set and its complement are disjoint");
        (sign, BasisForm::new(self.mode, comp))
    }

    /// Exact exterior derivative as a combination of basis forms.
    pub fn differential(&self) -> SmallVec<[(BasisForm, f64); MAX_DIM]> {
        let mut out = SmallVec::new();
        if self.mode.is_constant() {
            return out;
        }
        let phase = self.mode.phase;
        for (axis, &k) in self.mode.wave_vector().iter().enumerate() {
            if k == 0 || self.covectors.contains(axis) {
                continue;
            }
            // ∂ cos(k·x) = -k sin(k·x), ∂ sin(k·x) = k cos(k·x)
            let deriv = match phase {
                Phase::Cos => -(k as f64),
                Phase::Sin => k as f64,
            };
            let single = CovectorSet::from_bits(1 << axis);
            let (sign, covectors) = single.wedge(self.covectors).expect("axis not in set");
            let mode = FourierMode {
                phase: phase.flipped(),
                ..self.mode
            };
            out.push((BasisForm::new(mode, covectors), sign * deriv));
        }
        out
    }

    /// Product `e_a ∧ e_b` in the unit-volume frame: the physical product is
    /// `(2π)^{-d/2}` times the returned combination.
    pub fn unit_wedge(&self, other: &BasisForm) -> SmallVec<[(BasisForm, f64); 2]> {
        let mut out = SmallVec::new();
        let Some((cov_sign, covectors)) = self.covectors.wedge(other.covectors) else {
            return out;
        };
        let dim = self.dim();
        let ka = self.mode.wave_vector();
        let kb = other.mode.wave_vector();
        let mut sum = [0i16; MAX_DIM];
        let mut diff = [0i16; MAX_DIM];
        for i in 0..dim {
            sum[i] = ka[i] + kb[i];
            diff[i] = ka[i] - kb[i];
        }
        use Phase::*;
        // φa(A) φb(B) = ½ [s_diff φ(A-B) + s_sum φ(A+B)]
        let (phase, s_diff, s_sum) = match (self.mode.phase, other.mode.phase) {
            (Cos, Cos) => (Cos, 1.0, 1.0),
            (Sin, Sin) => (Cos, 1.0, -1.0),
            (Sin, Cos) => (Sin, 1.0, 1.0),
            (Cos, Sin) => (Sin, -1.0, 1.0),
        };
        let na = self.mode.unit_norm_sq();
        let nb = other.mode.unit_norm_sq();
        for (k, s) in [(&diff[..dim], s_diff), (&sum[..dim], s_sum)] {
            let Some((canon_sign, mode)) = FourierMode::canonical(k, phase) else {
                continue;
            };
            let scale = unit_norm_ratio(na * nb, mode.unit_norm_sq());
            let coef = 0.5 * s * canon_sign * scale * cov_sign;
            let form = BasisForm::new(mode, covectors);
            if let Some(entry) = out.iter_mut().find(|(f, _)| *f == form) {
                entry.1 += coef;
            } else {
                out.push((form, coef));
            }
        }
        out.retain(|(_, c)| *c != 0.0);
        out
    }

    /// Integral over the torus in the unit-volume frame: 1 for the constant
    /// top-degree form, 0 otherwise. The physical trace is `(2π)^{d/2}` times this.
    pub fn unit_trace(&self) -> f64 {
        if self.mode.is_constant() && self.covectors == CovectorSet::full(self.dim()) {
            1.0
        } else {
            0.0
        }
    }

    /// Pointwise coefficient of `dx_S` at `x`.
    pub fn eval(&self, x: &[f64]) -> f64 {
        self.normalization() * self.mode.eval(x)
    }
}

/// `sqrt(num / den)` for `num ∈ {1,2,4}`, `den ∈ {1,2}`, exact where possible.
fn unit_norm_ratio(num: u8, den: u8) -> f64 {
    match (num, den) {
        (n, d) if n == d => 1.0,
        (4, 1) => 2.0,
        (2, 1) | (4, 2) => SQRT_2,
        (1, 2) => FRAC_1_SQRT_2,
        (n, d) => (n as f64 / d as f64).sqrt(),
    }
}

impl Ord for BasisForm {
    fn cmp(&self, other: &Self) -> Ordering {
        self.mode
            .cmp(&other.mode)
            .then_with(|| self.covectors.cmp(&other.covectors))
    }
}

impl PartialOrd for BasisForm {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BasisForm {
    /// `cos[1,0]dx1^dx2`; the empty covector set prints as `1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let phase = match self.mode.phase {
            Phase::Cos => "cos",
            Phase::Sin => "sin",
        };
        write!(f, "{phase}[")?;
        for (i, k) in self.mode.wave_vector().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{k}")?;
        }
        write!(f, "]")?;
        if self.covectors.degree() == 0 {
            return write!(f, "1");
        }
        for (i, idx) in self.covectors.indices().iter().enumerate() {
            if i > 0 {
                write!(f, "^")?;
            }
            write!(f, "dx{idx}")?;
        }
        Ok(())
    }
}

/// Whether `value = |k|²` for some `k ∈ Z^dim`.
pub fn is_realized(dim: usize, value: u32) -> bool {
    fn go(remaining: u32, slots: usize) -> bool {
        if remaining == 0 {
            return true;
        }
        if slots == 0 {
            return false;
        }
        let mut a = 0u32;
        while a * a <= remaining {
            if go(remaining - a * a, slots - 1) {
                return true;
            }
            a += 1;
        }
        false
    }
    go(value, dim)
}

/// Finite set `A` of Laplacian eigenvalues. On the flat torus with period
/// `2π` every eigenvalue is an integer `|k|²`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EigenvalueSet {
    values: BTreeSet<u32>,
}

impl EigenvalueSet {
    pub fn empty() -> EigenvalueSet {
        EigenvalueSet::default()
    }

    pub fn new(dim: usize, values: impl IntoIterator<Item = u32>) -> Result<EigenvalueSet> {
        check_dim(dim)?;
        let mut set = BTreeSet::new();
        for value in values {
            if !is_realized(dim, value) {
                return Err(Error::UnrealizedEigenvalue { value, dim });
            }
            set.insert(value);
        }
        Ok(EigenvalueSet { values: set })
    }

    /// Like [`EigenvalueSet::new`] for real inputs; each value must be an
    /// integer realized as `|k|²`.
    pub fn from_reals(dim: usize, values: &[f64]) -> Result<EigenvalueSet> {
        let mut ints = Vec::with_capacity(values.len());
        for &v in values {
            if !(v >= 0.0 && v.fract() == 0.0 && v <= u32::MAX as f64) {
                return Err(Error::Config(format!("eigenvalue {v} is not a nonnegative integer")));
            }
            ints.push(v as u32);
        }
        EigenvalueSet::new(dim, ints)
    }

    /// All realized eigenvalues in `[0, max]`.
    pub fn up_to(dim: usize, max: u32) -> Result<EigenvalueSet> {
        check_dim(dim)?;
        Ok(EigenvalueSet {
            values: (0..=max).filter(|&v| is_realized(dim, v)).collect(),
        })
    }

    /// All realized eigenvalues in `(lo, hi]`.
    pub fn half_open(dim: usize, lo: u32, hi: u32) -> Result<EigenvalueSet> {
        let mut set = EigenvalueSet::up_to(dim, hi)?;
        set.values.retain(|&v| v > lo);
        Ok(set)
    }

    pub fn contains(&self, value: u32) -> bool {
        self.values.contains(&value)
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.values.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn max(&self) -> Option<u32> {
        self.values.iter().next_back().copied()
    }

    pub fn union(&self, other: &EigenvalueSet) -> EigenvalueSet {
        EigenvalueSet {
            values: self.values.union(&other.values).copied().collect(),
        }
    }

    pub fn intersection(&self, other: &EigenvalueSet) -> EigenvalueSet {
        EigenvalueSet {
            values: self.values.intersection(&other.values).copied().collect(),
        }
    }

    pub fn is_disjoint(&self, other: &EigenvalueSet) -> bool {
        self.values.is_disjoint(&other.values)
    }

    pub fn is_subset(&self, other: &EigenvalueSet) -> bool {
        self.values.is_subset(&other.values)
    }
}

impl fmt::Display for EigenvalueSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Canonical Fourier modes (cos phase) with `|k|² ≤ max`, in basis order.
fn canonical_wave_vectors(dim: usize, max: u32) -> Vec<FourierMode> {
    let radius = (max as f64).sqrt().floor() as i16;
    let mut out = Vec::new();
    let mut k = vec![-radius; dim];
    loop {
        let norm: u32 = k.iter().map(|&v| (v as i32 * v as i32) as u32).sum();
        if norm <= max {
            if let Some((sign, mode)) = FourierMode::canonical(&k, Phase::Cos) {
                if sign > 0.0 && mode.wave_vector() == k.as_slice() {
                    out.push(mode);
                }
            }
        }
        // odometer increment
        let mut i = dim;
        loop {
            if i == 0 {
                out.sort();
                return out;
            }
            i -= 1;
            if k[i] < radius {
                k[i] += 1;
                break;
            }
            k[i] = -radius;
        }
    }
}

/// All unit-norm basis forms with eigenvalue in `cutoff`, sorted by
/// eigenvalue, wave vector, phase and covectors.
pub fn enumerate_basis(dim: usize, cutoff: &EigenvalueSet) -> Result<Vec<BasisForm>> {
    check_dim(dim)?;
    let Some(max) = cutoff.max() else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    for mode in canonical_wave_vectors(dim, max) {
        if !cutoff.contains(mode.eigenvalue()) {
            continue;
        }
        let phases: &[Phase] = if mode.is_constant() {
            &[Phase::Cos]
        } else {
            &[Phase::Cos, Phase::Sin]
        };
        for &phase in phases {
            let mode = FourierMode { phase, ..mode };
            for bits in 0..(1u16 << dim) {
                out.push(BasisForm::new(mode, CovectorSet::from_bits(bits as u8)));
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Indexed truncated basis `A_A`, shared read-only.
#[derive(Debug)]
pub struct Basis {
    dim: usize,
    cutoff: EigenvalueSet,
    forms: Vec<BasisForm>,
    index: HashMap<BasisForm, u32>,
}

// the index is a function of the forms
impl PartialEq for Basis {
    fn eq(&self, other: &Basis) -> bool {
        self.dim == other.dim && self.forms == other.forms
    }
}

impl Basis {
    pub fn new(dim: usize, cutoff: &EigenvalueSet) -> Result<Basis> {
        let forms = enumerate_basis(dim, cutoff)?;
        let index = forms.iter().enumerate().map(|(i, f)| (*f, i as u32)).collect();
        Ok(Basis {
            dim,
            cutoff: cutoff.clone(),
            forms,
            index,
        })
    }

    /// Cached basis table; each `(dim, cutoff)` pair is enumerated once.
    pub fn shared(dim: usize, cutoff: &EigenvalueSet) -> Result<Arc<Basis>> {
        type Cache = Mutex<HashMap<(usize, EigenvalueSet), Arc<Basis>>>;
        static CACHE: OnceLock<Cache> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        let key = (dim, cutoff.clone());
        if let Some(b) = cache.lock().expect("basis cache poisoned").get(&key) {
            return Ok(Arc::clone(b));
        }
        let basis = Arc::new(Basis::new(dim, cutoff)?);
        cache
            .lock()
            .expect("basis cache poisoned")
            .entry(key)
            .or_insert_with(|| Arc::clone(&basis));
        Ok(basis)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn cutoff(&self) -> &EigenvalueSet {
        &self.cutoff
    }

    pub fn forms(&self) -> &[BasisForm] {
        &self.forms
    }

    pub fn len(&self) -> usize {
        self.forms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.forms.is_empty()
    }

    pub fn get(&self, i: usize) -> BasisForm {
        self.forms[i]
    }

    pub fn index_of(&self, form: &BasisForm) -> Option<usize> {
        self.index.get(form).map(|&i| i as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(dim: usize, v: &[u32]) -> EigenvalueSet {
        EigenvalueSet::new(dim, v.iter().copied()).unwrap()
    }

    #[test]
    fn harmonic_basis_of_t2_has_four_forms() {
        let forms = enumerate_basis(2, &set(2, &[0])).unwrap();
        assert_eq!(forms.len(), 4);
        assert!(forms.iter().all(|f| f.mode().is_constant()));
        let degrees: Vec<_> = forms.iter().map(|f| f.degree()).collect();
        assert_eq!(degrees, vec![0, 1, 1, 2]);
    }

    #[test]
    fn first_eigenvalue_truncation_matches_brute_force() {
        // brute force over k ∈ [-2,2]^2, identifying k with -k
        let mut modes = BTreeSet::new();
        for a in -2i16..=2 {
            for b in -2i16..=2 {
                if a * a + b * b <= 1 {
                    let key = if (a, b) < (0, 0) { (-a, -b) } else { (a, b) };
                    modes.insert(key);
                }
            }
        }
        let functions = modes.iter().map(|&k| if k == (0, 0) { 1 } else { 2 }).sum::<usize>();
        let forms = enumerate_basis(2, &set(2, &[0, 1])).unwrap();
        assert_eq!(forms.len(), functions * 4);
        assert_eq!(forms.len(), 20);
    }

    #[test]
    fn empty_cutoff_enumerates_nothing() {
        assert!(enumerate_basis(2, &EigenvalueSet::empty()).unwrap().is_empty());
    }

    #[test]
    fn dimension_one_is_rejected() {
        assert_eq!(
            enumerate_basis(1, &EigenvalueSet::empty()),
            Err(Error::InvalidManifold(1))
        );
    }

    #[test]
    fn three_is_not_an_eigenvalue_on_t2() {
        assert!(!is_realized(2, 3));
        assert!(is_realized(3, 3));
        assert!(EigenvalueSet::new(2, [3]).is_err());
        assert_eq!(EigenvalueSet::up_to(2, 5).unwrap(), set(2, &[0, 1, 2, 4, 5]));
    }

    #[test]
    fn enumeration_is_sorted_and_unique() {
        let forms = enumerate_basis(3, &EigenvalueSet::up_to(3, 3).unwrap()).unwrap();
        assert!(forms.windows(2).all(|w| w[0] < w[1]));
        let lambdas: Vec<_> = forms.iter().map(|f| f.eigenvalue()).collect();
        assert!(lambdas.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn canonical_mode_flips_sign_of_sine() {
        let (s, m) = FourierMode::canonical(&[-1, 2], Phase::Sin).unwrap();
        assert_eq!(s, -1.0);
        assert_eq!(m.wave_vector(), &[1, -2]);
        assert!(FourierMode::canonical(&[0, 0], Phase::Sin).is_none());
    }

    #[test]
    fn covector_wedge_signs() {
        let dx1 = CovectorSet::from_indices(&[1]).unwrap();
        let dx2 = CovectorSet::from_indices(&[2]).unwrap();
        assert_eq!(dx1.wedge(dx2).unwrap().0, 1.0);
        assert_eq!(dx2.wedge(dx1).unwrap().0, -1.0);
        assert!(dx1.wedge(dx1).is_none());
    }

    #[test]
    fn unit_wedge_of_square_has_exact_constant_part() {
        let forms = enumerate_basis(2, &set(2, &[1])).unwrap();
        for f in &forms {
            let g = BasisForm::new(f.mode(), CovectorSet::EMPTY);
            let prod = g.unit_wedge(&g);
            let constant = prod
                .iter()
                .find(|(b, _)| b.mode().is_constant())
                .map(|(_, c)| *c)
                .unwrap();
            assert_eq!(constant, 1.0);
        }
    }

    #[test]
    fn display_labels() {
        let forms = enumerate_basis(2, &set(2, &[0])).unwrap();
        let labels: Vec<_> = forms.iter().map(|f| f.to_string()).collect();
        assert_eq!(labels, ["cos[0,0]1", "cos[0,0]dx1", "cos[0,0]dx2", "cos[0,0]dx1^dx2"]);
    }
}
