//! Dense grid quadrature on `T^d`: an oracle for contractions that never
//! touches the symbolic kernels, signs or traces of the engine.
//!
//! Forms are sampled as coefficient vectors in the `dx_S` frame. Every
//! traced point is integrated on an `n^d` uniform grid, which is exact for
//! trigonometric polynomials of degree below `n` in each variable.

use std::f64::consts::PI;

use cutoff_tcft::spectral::{Basis, SpectralForm};

/// Samples of a form: one coefficient vector per grid point.
pub type Field = Vec<Vec<f64>>;

pub struct Grid {
    pub dim: usize,
    pub points: Vec<Vec<f64>>,
    /// Quadrature weight of one node: `(2π)^d / n^d`.
    pub weight: f64,
}

impl Grid {
    pub fn new(dim: usize, n: usize) -> Grid {
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
        let weight = (2.0 * PI / n as f64).powi(dim as i32);
        Grid { dim, points, weight }
    }

    pub fn sample(&self, f: &SpectralForm) -> Field {
        self.points.iter().map(|x| f.eval(x)).collect()
    }

    /// `∫ ⟨f, g⟩` with the pointwise frame inner product.
    pub fn l2(&self, f: &Field, g: &Field) -> f64 {
        f.iter()
            .zip(g)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>())
            .sum::<f64>()
            * self.weight
    }

    /// Heat flow for time `t` followed by projection onto `space`, both
    /// read off from quadrature inner products against the basis:
    /// `Σ_e e^{−λ_e t} ⟨e, f⟩ e`.
    pub fn heat(&self, space: &Basis, f: &Field, t: f64) -> Field {
        let mut out = vec![vec![0.0; 1 << self.dim]; self.points.len()];
        for b in space.forms() {
            let e = self.sample(&SpectralForm::basis(*b));
            let c = (-(b.eigenvalue() as f64) * t).exp() * self.l2(&e, f);
            for (o, v) in out.iter_mut().zip(&e) {
                for (x, y) in o.iter_mut().zip(v) {
                    *x += c * y;
                }
            }
        }
        out
    }

    pub fn wedge(&self, f: &Field, g: &Field) -> Field {
        f.iter()
            .zip(g)
            .map(|(a, b)| SpectralForm::wedge_values(self.dim, a, b))
            .collect()
    }

    /// Coordinates of `f` in `space`.
    pub fn coordinates(&self, space: &Basis, f: &Field) -> Vec<f64> {
        space
            .forms()
            .iter()
            .map(|b| self.l2(&self.sample(&SpectralForm::basis(*b)), f))
            .collect()
    }
}
