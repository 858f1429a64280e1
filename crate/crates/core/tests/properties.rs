//! Randomized invariants of the exterior calculus, the exponential sums and
//! the graph layer, each against an independent oracle where one exists.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use proptest::prelude::*;

use cutoff_tcft::expsum::ExpSum;
use cutoff_tcft::graph::{parse_chain, write_chain, AffineCubicalChain, AffineMap, RibbonGraph, Summand};
use cutoff_tcft::spectral::{Basis, EigenvalueSet, SpectralForm};
use cutoff_tcft::verify::catalog;

const TOL: f64 = 1e-12;

fn basis(dim: usize, max: u32) -> Basis {
    Basis::new(dim, &EigenvalueSet::up_to(dim, max).unwrap()).unwrap()
}

/// Random combination of up to eight basis forms on `T^dim`, `Λ ≤ 2`.
fn form(dim: usize) -> impl Strategy<Value = SpectralForm> {
    let len = basis(dim, 2).len();
    prop::collection::vec((0..len, -2.0f64..2.0), 1..8).prop_map(move |picks| {
        let b = basis(dim, 2);
        SpectralForm::from_terms(dim, picks.into_iter().map(|(i, c)| (b.get(i), c)))
    })
}

fn dim_and_forms() -> impl Strategy<Value = (usize, SpectralForm, SpectralForm)> {
    (2usize..=3).prop_flat_map(|d| (Just(d), form(d), form(d)))
}

/// Uniform grid with `n` points per axis; exact for trigonometric
/// polynomials of degree below `n` in each variable.
fn grid(dim: usize, n: usize) -> Vec<Vec<f64>> {
    let mut points = vec![Vec::new()];
    for _ in 0..dim {
        points = points
            .into_iter()
            .flat_map(|p| {
                (0..n).map(move |i| {
                    let mut q = p.clone();
                    q.push(2.0 * PI * i as f64 / n as f64);
                    q
                })
            })
            .collect();
    }
    points
}

/// `∫_{T^d}` of the top coefficient of the pointwise wedge.
fn quadrature_pairing(dim: usize, a: &SpectralForm, b: &SpectralForm) -> f64 {
    let points = grid(dim, 8);
    let top = (1 << dim) - 1;
    let mean = points
        .iter()
        .map(|x| SpectralForm::wedge_values(dim, &a.eval(x), &b.eval(x))[top])
        .sum::<f64>()
        / points.len() as f64;
    mean * (2.0 * PI).powi(dim as i32)
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn d_and_codifferential_square_to_zero((_, a, _) in dim_and_forms()) {
        prop_assert!(a.differential().differential().max_abs() < TOL);
        prop_assert!(a.codifferential().codifferential().max_abs() < TOL);
    }

    #[test]
    fn star_squares_to_the_degree_sign((dim, a, _) in dim_and_forms()) {
        for p in 0..=dim {
            let part = a.degree_part(p);
            let sign = if (p * (dim - p)) % 2 == 0 { 1.0 } else { -1.0 };
            let twice = part.hodge_star().hodge_star();
            prop_assert!(twice.max_abs_diff(&(&part * sign)) < TOL);
        }
    }

    #[test]
    fn laplacian_commutes_with_d((_, a, _) in dim_and_forms()) {
        let lhs = a.laplacian().differential();
        let rhs = a.differential().laplacian();
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-10);
    }

    #[test]
    fn codifferential_is_the_adjoint_of_d((dim, a, b) in dim_and_forms()) {
        let lhs = a.differential().inner(&b);
        let rhs = a.inner(&b.codifferential());
        prop_assert!((lhs - rhs).abs() < 1e-10, "dim {dim}: {lhs} vs {rhs}");
    }

    #[test]
    fn wedge_and_trace_match_grid_quadrature((dim, a, b) in dim_and_forms()) {
        let exact = a.wedge(&b).trace();
        let grid = quadrature_pairing(dim, &a, &b);
        prop_assert!((exact - grid).abs() < 1e-10, "{exact} vs {grid}");
    }

    #[test]
    fn inner_product_is_trace_of_wedge_with_star((dim, a, b) in dim_and_forms()) {
        let via_trace = a.wedge(&b.hodge_star()).trace();
        prop_assert!((a.inner(&b) - via_trace).abs() < 1e-10, "dim {dim}");
    }

    #[test]
    fn interval_integral_matches_simpson(r0 in -3.0f64..6.0, r1 in -3.0f64..6.0, c in -2.0f64..2.0) {
        let s = ExpSum::exp(0, r0, c).times(&ExpSum::exp(1, r1, 1.0));
        let n = 200;
        let simpson = |r: f64| {
            let h = 1.0 / n as f64;
            (0..=n)
                .map(|i| {
                    let w = if i == 0 || i == n { 1.0 } else if i % 2 == 1 { 4.0 } else { 2.0 };
                    w * (-r * i as f64 * h).exp()
                })
                .sum::<f64>()
                * h
                / 3.0
        };
        let oracle = c * simpson(r0) * simpson(r1);
        prop_assert!((s.integrate_unit_box() - oracle).abs() < 1e-7 * oracle.abs().max(1.0));
    }

    #[test]
    fn boundary_squares_to_zero(
        offsets in prop::collection::vec(0.0f64..1.0, 3),
        slopes in prop::collection::vec(prop::collection::vec(0.0f64..1.0, 3), 3),
        k in 1usize..=3,
    ) {
        let s = Summand {
            coef: 1.0,
            cube_dim: k,
            graph: catalog::star_merge(),
            lengths: (0..3)
                .map(|e| AffineMap { offset: offsets[e], slopes: slopes[e][..k].to_vec() })
                .collect(),
        };
        let c = AffineCubicalChain::single(s);
        prop_assert!(c.boundary().boundary().simplify(1e-12).is_zero());
    }

    #[test]
    fn gluing_is_associative(lengths in prop::collection::vec(0.05f64..1.0, 7), order in 0usize..3) {
        let p = |g: RibbonGraph, ls: &[f64]| AffineCubicalChain::point(g, ls);
        let (a, b, c) = match order {
            0 => (p(catalog::edge(), &lengths[..1]), p(catalog::star_split(), &lengths[1..4]), p(catalog::star_merge(), &lengths[4..7])),
            1 => (p(catalog::star_split(), &lengths[..3]), p(catalog::star_merge(), &lengths[3..6]), p(catalog::edge(), &lengths[6..])),
            _ => (p(catalog::cup(), &lengths[..1]), p(catalog::star_merge(), &lengths[1..4]), p(catalog::edge(), &lengths[4..5])),
        };
        let left = a.then(&b).unwrap().then(&c).unwrap();
        let right = a.then(&b.then(&c).unwrap()).unwrap();
        prop_assert_eq!(left.summands.len(), 1);
        let (l, r) = (&left.summands[0], &right.summands[0]);
        prop_assert!(l.graph.is_isomorphic(&r.graph));
        let total = |s: &Summand| s.lengths.iter().map(|m| m.offset).sum::<f64>();
        prop_assert!((total(l) - total(r)).abs() < TOL);
    }

    #[test]
    fn chain_text_round_trips(lengths in prop::collection::vec(0.0f64..2.0, 3), coef in -3.0f64..3.0) {
        let mut c = AffineCubicalChain::point(catalog::star_split(), &lengths);
        c.summands[0].coef = coef;
        let c = c.disjoint_union(&catalog::named_chain("theta").unwrap());
        let text = write_chain(&c);
        prop_assert_eq!(parse_chain("p", &text).unwrap(), c);
    }
}

#[test]
fn basis_forms_are_laplacian_eigenforms() {
    for dim in 2..=3 {
        for b in basis(dim, 2).forms() {
            let a = SpectralForm::basis(*b);
            let expect = &a * b.eigenvalue() as f64;
            assert!(a.laplacian().max_abs_diff(&expect) < TOL, "{b}");
        }
    }
}

#[test]
fn gram_matrix_is_the_identity() {
    let b = basis(2, 2);
    let n = b.len();
    let gram = DMatrix::from_fn(n, n, |i, j| {
        let (x, y) = (SpectralForm::basis(b.get(i)), SpectralForm::basis(b.get(j)));
        x.wedge(&y.hodge_star()).trace()
    });
    assert!((gram - DMatrix::identity(n, n)).abs().max() < 1e-12);
}

/// Harmonic dimension in degree `p` is `C(d, p)`: computed as
/// `dim ker d_p − rank d_{p−1}` from the matrices of `d`.
#[test]
fn cohomology_ranks_are_binomial() {
    for dim in 2..=3 {
        let b = basis(dim, 2);
        let of_degree = |p: usize| -> Vec<usize> { (0..b.len()).filter(|&i| b.get(i).degree() == p).collect() };
        let matrix = |p: usize| {
            let (src, dst) = (of_degree(p), of_degree(p + 1));
            DMatrix::from_fn(dst.len().max(1), src.len().max(1), |r, c| {
                match (dst.get(r), src.get(c)) {
                    (Some(&o), Some(&i)) => SpectralForm::basis(b.get(i)).differential().coefficient(&b.get(o)),
                    _ => 0.0,
                }
            })
        };
        let rank = |p: usize| matrix(p).rank(1e-9);
        for p in 0..=dim {
            let kernel = of_degree(p).len() - if p < dim { rank(p) } else { 0 };
            let image = if p > 0 { rank(p - 1) } else { 0 };
            assert_eq!(kernel - image, binomial(dim, p), "dim {dim} degree {p}");
        }
    }
}

#[test]
fn split_cutoffs_partition_the_basis() {
    let whole = basis(2, 2).len();
    let low = Basis::new(2, &EigenvalueSet::up_to(2, 1).unwrap()).unwrap().len();
    let high = Basis::new(2, &EigenvalueSet::half_open(2, 1, 2).unwrap())
        .unwrap()
        .len();
    assert_eq!(low + high, whole);
}
