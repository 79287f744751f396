//! Conformal metrics `g = e^{2f} g_{S²}` on the sphere.
//!
//! All tensors keep their components in the round orthonormal frame `{e₁, e₂}`,
//! which is `g`-orthogonal with `|e_A|_g = e^f`. Operators of `g` are obtained
//! from the round ones through the two-dimensional conformal change of the
//! Levi-Civita connection,
//! `∇^g_A ω_B = ∇_A ω_B - f_A ω_B - f_B ω_A + δ_AB ⟨df, ω⟩`.

use crate::sphere::{
    CovectorField, ScalarField, SphereGrid, SymTensorField, Tensor2Field, VectorField,
};
use crate::{Error, Result};

/// Residual bound under which a field counts as conformal Killing.
pub const CONFORMAL_KILLING_TOL: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct ConformalMetric<'g> {
    grid: &'g SphereGrid,
    exponent: ScalarField,
    /// `e^{2f}`
    density: ScalarField,
}

impl<'g> ConformalMetric<'g> {
    pub fn new(grid: &'g SphereGrid, exponent: ScalarField) -> Self {
        grid.check(&exponent);
        assert!(exponent.is_finite(), "conformal exponent must be finite");
        let density = exponent.map(|f| (2.0 * f).exp());
        Self {
            grid,
            exponent,
            density,
        }
    }

    pub fn round(grid: &'g SphereGrid) -> Self {
        Self::new(grid, grid.field_from_nodes(|_| 0.0))
    }

    pub fn grid(&self) -> &'g SphereGrid {
        self.grid
    }

    pub fn exponent(&self) -> &ScalarField {
        &self.exponent
    }

    /// `e^{2f}`, the ratio `dvol_g / dvol_{S²}` and `g_AB = e^{2f} δ_AB`.
    pub fn density(&self) -> &ScalarField {
        &self.density
    }

    fn inverse_density(&self) -> ScalarField {
        self.exponent.map(|f| (-2.0 * f).exp())
    }

    /// `K_g = e^{-2f} (1 - Δ_{S²} f)`.
    pub fn gauss_curvature(&self) -> ScalarField {
        let lap = self.grid.laplacian(&self.exponent);
        self.inverse_density().zip_map(&lap, |w, d| w * (1.0 - d))
    }

    /// `∫ F dvol_g`.
    pub fn integrate(&self, field: &ScalarField) -> f64 {
        self.grid.integrate(&(field * &self.density))
    }

    pub fn area(&self) -> f64 {
        self.grid.integrate(&self.density)
    }

    /// Gradient of `F` with the index raised by `g`: `e^{-2f} (∇F)`.
    pub fn grad(&self, field: &ScalarField) -> VectorField {
        self.sharp(&self.grid.grad(field))
    }

    pub fn sharp(&self, w: &CovectorField) -> VectorField {
        w.weighted(&self.inverse_density()).sharp()
    }

    pub fn flat(&self, x: &VectorField) -> CovectorField {
        x.weighted(&self.density).flat()
    }

    /// `⟨X, Y⟩_g = e^{2f} Σ X^A Y^A`.
    pub fn inner_vectors(&self, x: &VectorField, y: &VectorField) -> ScalarField {
        &x.flat().apply(y) * &self.density
    }

    /// `⟨ω, θ⟩_g = e^{-2f} Σ ω_A θ_A`.
    pub fn inner_covectors(&self, a: &CovectorField, b: &CovectorField) -> ScalarField {
        &a.dot(b) * &self.inverse_density()
    }

    /// `⟨S, T⟩_g = e^{-4f} Σ S_AB T_AB`.
    pub fn inner_tensors(&self, s: &SymTensorField, t: &SymTensorField) -> ScalarField {
        let w = self.exponent.map(|f| (-4.0 * f).exp());
        &s.contract(t) * &w
    }

    /// `g`-trace of a covariant 2-tensor: `e^{-2f}(T₁₁ + T₂₂)`.
    pub fn trace(&self, t: &SymTensorField) -> ScalarField {
        &t.trace() * &self.inverse_density()
    }

    /// `T(ω^♯, ·)` with `♯` taken in `g`.
    pub fn contract_covector(&self, t: &SymTensorField, w: &CovectorField) -> CovectorField {
        t.contract_covector(w).weighted(&self.inverse_density())
    }

    pub fn laplacian(&self, field: &ScalarField) -> ScalarField {
        &self.grid.laplacian(field) * &self.inverse_density()
    }

    /// `div_g X = div_{S²} X + 2 X(f)` for a vector field.
    pub fn div_vector(&self, x: &VectorField) -> ScalarField {
        let df = self.grid.grad(&self.exponent);
        self.grid.div(&x.flat()) + df.apply(x).scale(2.0)
    }

    /// `div_g ω = e^{-2f} div_{S²} ω` for a 1-form.
    pub fn div_covector(&self, w: &CovectorField) -> ScalarField {
        &self.grid.div(w) * &self.inverse_density()
    }

    /// `curl_g ω = e^{-2f} curl_{S²} ω`.
    pub fn curl(&self, w: &CovectorField) -> ScalarField {
        &self.grid.curl(w) * &self.inverse_density()
    }

    /// `(div_g T)_A = e^{-2f} ((div_{S²} T)_A - (tr_{S²} T) f_A)`; the correction
    /// drops out for trace-free `T`.
    pub fn div_sym(&self, t: &SymTensorField) -> CovectorField {
        let round = self.grid.div_sym(t);
        let round = if t.is_traceless() {
            round
        } else {
            let df = self.grid.grad(&self.exponent);
            round.sub(&df.weighted(&t.trace()))
        };
        round.weighted(&self.inverse_density())
    }

    /// Levi-Civita covariant derivative `∇^g_A ω_B`.
    pub fn covariant_derivative(&self, w: &CovectorField) -> Tensor2Field {
        let round = self.grid.covariant_derivative(w);
        let df = self.grid.grad(&self.exponent);
        let pair = df.dot(w);
        let fw = |a: usize, b: usize| df.component(a) * w.component(b);
        Tensor2Field {
            t11: &(&round.t11 - &fw(0, 0).scale(2.0)) + &pair,
            t12: &round.t12 - &(&fw(0, 1) + &fw(1, 0)),
            t21: &round.t21 - &(&fw(1, 0) + &fw(0, 1)),
            t22: &(&round.t22 - &fw(1, 1).scale(2.0)) + &pair,
        }
    }

    /// Deformation tensor `L_X g = e^{2f} (L_X g_{S²} + 2 X(f) g_{S²})`.
    ///
    /// Equal to `sym(∇^g X^♭)`, but only `X` and `f` are differentiated, never
    /// the product `e^{2f} X`.
    pub fn deformation_tensor(&self, x: &VectorField) -> SymTensorField {
        let round = self.grid.covariant_derivative(&x.flat()).sym();
        let xf = self.grid.grad(&self.exponent).apply(x).scale(2.0);
        round
            .add(&SymTensorField::metric(&xf))
            .weighted(&self.density)
    }

    /// Trace-free part of `L_X g`; vanishes exactly when `X` is conformal Killing.
    pub fn conformal_killing_residual(&self, x: &VectorField) -> SymTensorField {
        self.deformation_tensor(x).trace_free()
    }

    /// `max |(L_X g)^⁰|_g`, conformally invariant in `f`.
    pub fn conformal_killing_defect(&self, x: &VectorField) -> f64 {
        let res = self.conformal_killing_residual(x);
        self.inner_tensors(&res, &res).map(f64::sqrt).max_abs()
    }

    /// The `Ω` with `L_X g = Ω g`, namely `div_g X`.
    pub fn deformation_scalar(&self, x: &VectorField) -> Result<ScalarField> {
        let residual = self.conformal_killing_defect(x);
        if residual > CONFORMAL_KILLING_TOL {
            return Err(Error::NotConformalKilling {
                residual,
                tolerance: CONFORMAL_KILLING_TOL,
            });
        }
        Ok(self.div_vector(x))
    }
}

/// `∇x₁, ∇x₂, ∇x₃` on the round sphere; `∇x_i` has frame components
/// `(⟨e₁, ê_i⟩, ⟨e₂, ê_i⟩)`.
pub fn ckv_fields(grid: &SphereGrid) -> [VectorField; 3] {
    std::array::from_fn(|i| {
        VectorField::new(
            grid.field_from_nodes(|idx| grid.frame(idx).e1[i]),
            grid.field_from_nodes(|idx| grid.frame(idx).e2[i]),
        )
    })
}

/// Rotation generators `ê_i × n` (Killing fields of the round metric).
pub fn rotation_fields(grid: &SphereGrid) -> [VectorField; 3] {
    std::array::from_fn(|i| {
        let rot = |idx: usize| {
            let n = grid.frame(idx).normal;
            let mut v = [0.0; 3];
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            v[k] = n[j];
            v[j] = -n[k];
            v
        };
        VectorField::new(
            grid.field_from_nodes(|idx| {
                let v = rot(idx);
                let e = grid.frame(idx).e1;
                v[0] * e[0] + v[1] * e[1] + v[2] * e[2]
            }),
            grid.field_from_nodes(|idx| {
                let v = rot(idx);
                let e = grid.frame(idx).e2;
                v[0] * e[0] + v[1] * e[1] + v[2] * e[2]
            }),
        )
    })
}

/// `Σ c_i ∇x_i + Σ d_i R_i` for the six-dimensional conformal algebra of `S²`.
pub fn conformal_killing_combination(grid: &SphereGrid, c: [f64; 3], d: [f64; 3]) -> VectorField {
    let grads = ckv_fields(grid);
    let rots = rotation_fields(grid);
    let mut out = grads[0].scale(0.0);
    for i in 0..3 {
        out = out.add(&grads[i].scale(c[i])).add(&rots[i].scale(d[i]));
    }
    out
}
