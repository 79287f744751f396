//! Intrinsic differential operators of the round sphere.
//!
//! Scalars are differentiated spectrally. Frame components of 1-forms and
//! 2-tensors are not smooth functions on the sphere (the frame is singular at
//! the poles), so they are first lifted to Cartesian components in `R³`, which
//! are smooth; each Cartesian component is differentiated as a scalar and the
//! result is projected back onto `e₁, e₂`. The projection is the one place the
//! curvature of the frame enters: it reproduces the `cot θ` connection terms
//! `∇_{e₂} e₁ = cot θ e₂`, `∇_{e₂} e₂ = -cot θ e₁` without dividing by `sin θ`.

use super::fields::{CovectorField, ScalarField, SymTensorField, Tensor2Field};
use super::grid::SphereGrid;
use super::transform::Synthesis;
use crate::{par, Error, Result};

impl SphereGrid {
    /// Round gradient `(∂_θ f, (1/sin θ) ∂_φ f)`; also the differential `df`.
    pub fn grad(&self, f: &ScalarField) -> CovectorField {
        if f.max() == f.min() {
            return CovectorField::zeros_like(f);
        }
        let c = self.analyze(f);
        CovectorField::new(
            self.synthesize_with(&c, Synthesis::ThetaDerivative),
            self.synthesize_with(&c, Synthesis::PhiDerivative),
        )
    }

    /// `Δ_{S²} f`, applied as `-l(l+1)` on each degree.
    pub fn laplacian(&self, f: &ScalarField) -> ScalarField {
        if f.max() == f.min() {
            return f.zeros_like();
        }
        let c = self.analyze(f).map_degree(|l| -((l * (l + 1)) as f64));
        self.synthesize_with(&c, Synthesis::Value)
    }

    /// Zero-mean solution of `Δ_{S²} u = rhs`.
    ///
    /// Rejects right-hand sides with `|∫ rhs| > 1e-10 · max(∫|rhs|, 1)`.
    pub fn poisson_solve(&self, rhs: &ScalarField) -> Result<ScalarField> {
        let integral = self.integrate(rhs);
        let allowed = 1e-10 * self.integrate(&rhs.map(f64::abs)).max(1.0);
        if integral.abs() > allowed {
            return Err(Error::Incompatible { integral, allowed });
        }
        let c = self.analyze(rhs).map_degree(|l| {
            if l == 0 {
                0.0
            } else {
                -1.0 / (l * (l + 1)) as f64
            }
        });
        Ok(self.synthesize_with(&c, Synthesis::Value))
    }

    /// Full covariant derivative `(∇ω)_AB = ∇_A ω_B`.
    pub fn covariant_derivative(&self, w: &CovectorField) -> Tensor2Field {
        self.check(&w.c1);
        self.check(&w.c2);
        let lifted: Vec<ScalarField> = (0..3)
            .map(|i| {
                self.field_from_nodes(|idx| {
                    let fr = self.frame(idx);
                    w.c1.values()[idx] * fr.e1[i] + w.c2.values()[idx] * fr.e2[i]
                })
            })
            .collect();
        let grads = par::map_indices(3, |i| self.grad(&lifted[i]));
        let comp = |a: usize, b: usize| {
            self.field_from_nodes(|idx| {
                let eb = self.frame(idx).e(b);
                (0..3)
                    .map(|i| grads[i].component(a).values()[idx] * eb[i])
                    .sum()
            })
        };
        Tensor2Field {
            t11: comp(0, 0),
            t12: comp(0, 1),
            t21: comp(1, 0),
            t22: comp(1, 1),
        }
    }

    /// `div ω = ∇^A ω_A`.
    pub fn div(&self, w: &CovectorField) -> ScalarField {
        self.covariant_derivative(w).trace()
    }

    /// `curl ω = ε^{AB} ∇_A ω_B` with `ε(e₁, e₂) = +1`.
    pub fn curl(&self, w: &CovectorField) -> ScalarField {
        self.covariant_derivative(w).antisym_contraction()
    }

    /// `(div T)_A = ∇^B T_BA` for a symmetric 2-tensor.
    pub fn div_sym(&self, t: &SymTensorField) -> CovectorField {
        const PAIRS: [(usize, usize); 6] = [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)];
        let lifted: Vec<ScalarField> = PAIRS
            .iter()
            .map(|&(i, j)| {
                self.field_from_nodes(|idx| {
                    let fr = self.frame(idx);
                    let mut v = 0.0;
                    for a in 0..2 {
                        for b in 0..2 {
                            v += t.component(a, b).values()[idx] * fr.e(a)[i] * fr.e(b)[j];
                        }
                    }
                    v
                })
            })
            .collect();
        let grads = par::map_indices(PAIRS.len(), |p| self.grad(&lifted[p]));
        let slot = |i: usize, j: usize| {
            PAIRS
                .iter()
                .position(|&(p, q)| (p, q) == (i.min(j), i.max(j)))
                .expect("pair listed")
        };
        let comp = |a: usize| {
            self.field_from_nodes(|idx| {
                let fr = self.frame(idx);
                let ea = fr.e(a);
                let mut v = 0.0;
                for b in 0..2 {
                    let eb = fr.e(b);
                    for i in 0..3 {
                        for j in 0..3 {
                            v += grads[slot(i, j)].component(b).values()[idx] * eb[i] * ea[j];
                        }
                    }
                }
                v
            })
        };
        CovectorField::new(comp(0), comp(1))
    }

    /// Hessian `∇_A ∇_B f`.
    pub fn hessian(&self, f: &ScalarField) -> SymTensorField {
        let h = self.covariant_derivative(&self.grad(f));
        SymTensorField::new(h.t11, h.t12.zip_map(&h.t21, |a, b| 0.5 * (a + b)), h.t22)
    }
}
