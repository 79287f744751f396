//! Surfaces in the future lightcone `C₀` of Minkowski space.
//!
//! A function `h` on the sphere gives the cone graph `S_h = {(e^h, e^h n)}`,
//! whose induced metric is `e^{2h} g_{S²}`. Tangent tensors on `S_h` are stored
//! by their components on the pushed-forward round frame `Ẽ_A = ψ_*(e_A)`, so
//! the induced metric has components `e^{2h} δ_AB` and every intrinsic operator
//! of `S_h` is an operator of the [`ConformalMetric`] with exponent `h`.
//!
//! The ambient connection is flat, so the derivative of a field along `S_h` in
//! the direction `Ẽ_A` is the round frame derivative `e_A` of its rectangular
//! components.

use crate::conformal::ConformalMetric;
use crate::sphere::{CovectorField, ScalarField, SphereGrid, SymTensorField, Tensor2Field};
use crate::{Error, Result};

/// Rectangular components `(V⁰, V¹, V², V³)` along the surface.
#[derive(Debug, Clone, PartialEq)]
pub struct AmbientVectorField {
    pub components: [ScalarField; 4],
}

impl AmbientVectorField {
    /// `η(V, W) = -V⁰W⁰ + Σ VⁱWⁱ`.
    pub fn minkowski(&self, other: &Self) -> ScalarField {
        let mut out = -(&self.components[0] * &other.components[0]);
        for i in 1..4 {
            out = out + &self.components[i] * &other.components[i];
        }
        out
    }

    pub fn weighted(&self, w: &ScalarField) -> Self {
        Self {
            components: std::array::from_fn(|i| &self.components[i] * w),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            components: std::array::from_fn(|i| &self.components[i] - &other.components[i]),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.components.iter().fold(0.0, |m, c| m.max(c.max_abs()))
    }

    fn from_fn(grid: &SphereGrid, f: impl Fn(usize, usize) -> f64) -> Self {
        Self {
            components: std::array::from_fn(|mu| grid.field_from_nodes(|idx| f(idx, mu))),
        }
    }

    /// Frame derivatives `e_A(V)` of the rectangular components, `A = 1, 2`.
    pub fn frame_derivatives(&self, grid: &SphereGrid) -> [AmbientVectorField; 2] {
        let grads: Vec<CovectorField> = self.components.iter().map(|c| grid.grad(c)).collect();
        std::array::from_fn(|a| Self {
            components: std::array::from_fn(|mu| grads[mu].component(a).clone()),
        })
    }
}

/// The embedding `ψ_h` with cached position and tangent vectors.
#[derive(Debug, Clone)]
pub struct EmbeddedSurface<'g> {
    metric: ConformalMetric<'g>,
    position: AmbientVectorField,
    tangents: [AmbientVectorField; 2],
}

/// Embeds the graph of `h` into the lightcone: `P = e^h (1, n)` and
/// `Ẽ_A = e^h (e_A(h) (1, n) + (0, e_A n))`.
pub fn embed<'g>(grid: &'g SphereGrid, h: &ScalarField) -> EmbeddedSurface<'g> {
    let metric = ConformalMetric::new(grid, h.clone());
    let eh = h.exp();
    let dh = grid.grad(h);
    let position = AmbientVectorField::from_fn(grid, |idx, mu| {
        let v = eh.values()[idx];
        if mu == 0 {
            v
        } else {
            v * grid.frame(idx).normal[mu - 1]
        }
    });
    let tangents = std::array::from_fn(|a| {
        AmbientVectorField::from_fn(grid, |idx, mu| {
            let fr = grid.frame(idx);
            let da = dh.component(a).values()[idx];
            let v = eh.values()[idx];
            if mu == 0 {
                v * da
            } else {
                v * (da * fr.normal[mu - 1] + fr.e(a)[mu - 1])
            }
        })
    });
    EmbeddedSurface {
        metric,
        position,
        tangents,
    }
}

impl<'g> EmbeddedSurface<'g> {
    pub fn grid(&self) -> &'g SphereGrid {
        self.metric.grid()
    }

    pub fn h(&self) -> &ScalarField {
        self.metric.exponent()
    }

    /// The induced metric as a conformal metric on the parameter sphere.
    pub fn metric(&self) -> &ConformalMetric<'g> {
        &self.metric
    }

    pub fn position(&self) -> &AmbientVectorField {
        &self.position
    }

    pub fn tangent(&self, a: usize) -> &AmbientVectorField {
        &self.tangents[a]
    }

    /// `η(Ẽ_A, Ẽ_B)` as measured in the ambient space.
    pub fn induced_metric(&self) -> SymTensorField {
        SymTensorField::new(
            self.tangents[0].minkowski(&self.tangents[0]),
            self.tangents[0].minkowski(&self.tangents[1]),
            self.tangents[1].minkowski(&self.tangents[1]),
        )
    }

    /// `max |η(Ẽ_A, Ẽ_B) - e^{2h} δ_AB|`.
    pub fn induced_metric_error(&self) -> f64 {
        self.induced_metric()
            .sub(&SymTensorField::metric(self.metric.density()))
            .max_abs()
    }

    /// `max |u|` with `u = ½ (t - r)`; zero on the cone.
    pub fn cone_defect(&self) -> f64 {
        let p = &self.position.components;
        let r = self.grid().field_from_nodes(|idx| {
            (1..4)
                .map(|i| p[i].values()[idx].powi(2))
                .sum::<f64>()
                .sqrt()
        });
        (&p[0] - &r).scale(0.5).max_abs()
    }

    /// Checks that the tangent plane is spacelike at every node.
    pub fn assert_spacelike(&self) -> Result<()> {
        let m = self.induced_metric();
        for idx in 0..self.grid().n_nodes() {
            let (a, b, c) = (
                m.t11.values()[idx],
                m.t12.values()[idx],
                m.t22.values()[idx],
            );
            if !(a > 0.0 && a * c - b * b > 0.0) {
                return Err(Error::DegenerateSurface { node: idx });
            }
        }
        Ok(())
    }
}

/// Null normals `{L, L̄}` with `η(L, L̄) = -2`.
#[derive(Debug, Clone, PartialEq)]
pub struct NullFrame {
    pub l: AmbientVectorField,
    pub lbar: AmbientVectorField,
    /// `[e_A(L), e_A(L̄)]` when known in closed form; otherwise they are taken
    /// spectrally from the components.
    pub derivatives: Option<[[AmbientVectorField; 2]; 2]>,
}

impl NullFrame {
    pub fn new(l: AmbientVectorField, lbar: AmbientVectorField) -> Self {
        Self {
            l,
            lbar,
            derivatives: None,
        }
    }

    pub fn derivatives(&self, grid: &SphereGrid) -> [[AmbientVectorField; 2]; 2] {
        match &self.derivatives {
            Some(d) => d.clone(),
            None => [
                self.l.frame_derivatives(grid),
                self.lbar.frame_derivatives(grid),
            ],
        }
    }
}

/// `L = ∂_v = (1, n)` and its null partner
/// `L̄ = (1 + |∇h|², (|∇h|² - 1) n + 2 ∇h)`.
///
/// Both come with their frame derivatives: `e_A n = e_A` exactly, and only the
/// ambient components of `∇h` are differentiated spectrally.
pub fn null_frame(surface: &EmbeddedSurface<'_>) -> Result<NullFrame> {
    surface.assert_spacelike()?;
    let grid = surface.grid();
    let dh = grid.grad(surface.h());
    // ∇h as an ambient vector, W_i = h_A (e_A)_i, and s = |W|².
    let w: [ScalarField; 3] = std::array::from_fn(|i| {
        grid.field_from_nodes(|idx| {
            let fr = grid.frame(idx);
            dh.c1.values()[idx] * fr.e1[i] + dh.c2.values()[idx] * fr.e2[i]
        })
    });
    let dw: Vec<CovectorField> = w.iter().map(|c| grid.grad(c)).collect();
    let s = dh.dot(&dh);
    let ds: [ScalarField; 2] = std::array::from_fn(|a| {
        let mut acc = s.zeros_like();
        for i in 0..3 {
            acc = acc + &w[i] * dw[i].component(a);
        }
        acc.scale(2.0)
    });
    let l = AmbientVectorField::from_fn(grid, |idx, mu| {
        if mu == 0 {
            1.0
        } else {
            grid.frame(idx).normal[mu - 1]
        }
    });
    let lbar = AmbientVectorField::from_fn(grid, |idx, mu| {
        let sv = s.values()[idx];
        if mu == 0 {
            1.0 + sv
        } else {
            let n = grid.frame(idx).normal[mu - 1];
            (sv - 1.0) * n + 2.0 * w[mu - 1].values()[idx]
        }
    });
    let dl = std::array::from_fn(|a| {
        AmbientVectorField::from_fn(grid, |idx, mu| {
            if mu == 0 {
                0.0
            } else {
                grid.frame(idx).e(a)[mu - 1]
            }
        })
    });
    let dlbar = std::array::from_fn(|a| {
        AmbientVectorField::from_fn(grid, |idx, mu| {
            let dsv = ds[a].values()[idx];
            if mu == 0 {
                dsv
            } else {
                let fr = grid.frame(idx);
                let i = mu - 1;
                dsv * fr.normal[i]
                    + (s.values()[idx] - 1.0) * fr.e(a)[i]
                    + 2.0 * dw[i].component(a).values()[idx]
            }
        })
    });
    Ok(NullFrame {
        l,
        lbar,
        derivatives: Some([dl, dlbar]),
    })
}

/// Largest violation of the null-frame constraints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameDefects {
    pub l_null: f64,
    pub lbar_null: f64,
    pub normalization: f64,
    pub l_normal: f64,
    pub lbar_normal: f64,
}

impl FrameDefects {
    pub fn max(&self) -> f64 {
        [
            self.l_null,
            self.lbar_null,
            self.normalization,
            self.l_normal,
            self.lbar_normal,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

pub fn frame_defects(surface: &EmbeddedSurface<'_>, frame: &NullFrame) -> FrameDefects {
    let t = &surface.tangents;
    let normal = |v: &AmbientVectorField| {
        v.minkowski(&t[0])
            .max_abs()
            .max(v.minkowski(&t[1]).max_abs())
    };
    FrameDefects {
        l_null: frame.l.minkowski(&frame.l).max_abs(),
        lbar_null: frame.lbar.minkowski(&frame.lbar).max_abs(),
        normalization: (frame.l.minkowski(&frame.lbar) + 2.0).max_abs(),
        l_normal: normal(&frame.l),
        lbar_normal: normal(&frame.lbar),
    }
}

/// The null second fundamental forms and torsion of a surface in a given null frame.
#[derive(Debug, Clone)]
pub struct ExtrinsicData<'g> {
    pub metric: ConformalMetric<'g>,
    pub l: AmbientVectorField,
    pub lbar: AmbientVectorField,
    /// `χ_AB = η(∇_{Ẽ_A} L, Ẽ_B)`.
    pub chi: SymTensorField,
    /// `χ̄_AB = η(∇_{Ẽ_A} L̄, Ẽ_B)`.
    pub chibar: SymTensorField,
    pub trchi: ScalarField,
    pub trchibar: ScalarField,
    pub chihat: SymTensorField,
    pub chibarhat: SymTensorField,
    /// `ζ_A = ½ η(∇_{Ẽ_A} L, L̄)`.
    pub zeta: CovectorField,
}

/// `η(e_A(V), Ẽ_B)` for all `A, B`, without symmetrizing.
pub fn second_fundamental_form(
    surface: &EmbeddedSurface<'_>,
    v: &AmbientVectorField,
) -> Tensor2Field {
    pair_with_tangents(surface, &v.frame_derivatives(surface.grid()))
}

fn pair_with_tangents(surface: &EmbeddedSurface<'_>, dv: &[AmbientVectorField; 2]) -> Tensor2Field {
    let t = &surface.tangents;
    Tensor2Field {
        t11: dv[0].minkowski(&t[0]),
        t12: dv[0].minkowski(&t[1]),
        t21: dv[1].minkowski(&t[0]),
        t22: dv[1].minkowski(&t[1]),
    }
}

fn symmetrized(t: Tensor2Field) -> SymTensorField {
    SymTensorField::new(t.t11, t.t12.zip_map(&t.t21, |a, b| 0.5 * (a + b)), t.t22)
}

pub fn extrinsic_package<'g>(
    surface: &EmbeddedSurface<'g>,
    frame: &NullFrame,
) -> ExtrinsicData<'g> {
    let grid = surface.grid();
    let metric = surface.metric.clone();
    let [dl, dlbar] = frame.derivatives(grid);
    let chi = symmetrized(pair_with_tangents(surface, &dl));
    let chibar = symmetrized(pair_with_tangents(surface, &dlbar));
    let zeta = CovectorField::new(
        dl[0].minkowski(&frame.lbar).scale(0.5),
        dl[1].minkowski(&frame.lbar).scale(0.5),
    );
    ExtrinsicData {
        trchi: metric.trace(&chi),
        trchibar: metric.trace(&chibar),
        chihat: chi.trace_free(),
        chibarhat: chibar.trace_free(),
        metric,
        l: frame.l.clone(),
        lbar: frame.lbar.clone(),
        chi,
        chibar,
        zeta,
    }
}

/// `ε^{AB} S_A^C T_CB` with indices moved by `g = e^{2h} δ`.
pub fn wedge(metric: &ConformalMetric<'_>, s: &SymTensorField, t: &SymTensorField) -> ScalarField {
    let w = metric.exponent().map(|h| (-4.0 * h).exp());
    let sum = |a: usize, b: usize| {
        &(s.component(a, 0) * t.component(0, b)) + &(s.component(a, 1) * t.component(1, b))
    };
    &(&sum(0, 1) - &sum(1, 0)) * &w
}

/// Left-hand sides of the Gauss and Codazzi equations on the grid.
#[derive(Debug, Clone)]
pub struct GaussCodazziResiduals {
    /// `K + ¼ trχ trχ̄ - ½ (χ̂, χ̂̄)`
    pub gauss1: ScalarField,
    /// `curl ζ + ½ χ̂̄ ∧ χ̂`
    pub gauss2: ScalarField,
    /// `div χ̂ - ½ d trχ + χ̂·ζ - ½ trχ ζ`
    pub codazzi1: CovectorField,
    /// `div χ̂̄ - ½ d trχ̄ - χ̂̄·ζ + ½ trχ̄ ζ`
    pub codazzi2: CovectorField,
}

impl GaussCodazziResiduals {
    /// Max norms `[gauss1, gauss2, codazzi1, codazzi2]`.
    pub fn max_norms(&self) -> [f64; 4] {
        [
            self.gauss1.max_abs(),
            self.gauss2.max_abs(),
            self.codazzi1.max_norm(),
            self.codazzi2.max_norm(),
        ]
    }

    pub fn max(&self) -> f64 {
        self.max_norms().into_iter().fold(0.0, f64::max)
    }
}

pub fn gauss_codazzi_residuals(extr: &ExtrinsicData<'_>) -> GaussCodazziResiduals {
    let g = &extr.metric;
    let grid = g.grid();
    let k = g.gauss_curvature();
    let gauss1 = &(&k + &(&extr.trchi * &extr.trchibar).scale(0.25))
        - &g.inner_tensors(&extr.chihat, &extr.chibarhat).scale(0.5);
    let gauss2 = &g.curl(&extr.zeta) + &wedge(g, &extr.chibarhat, &extr.chihat).scale(0.5);
    let codazzi1 = g
        .div_sym(&extr.chihat)
        .sub(&grid.grad(&extr.trchi).scale(0.5))
        .add(&g.contract_covector(&extr.chihat, &extr.zeta))
        .sub(&extr.zeta.weighted(&extr.trchi).scale(0.5));
    let codazzi2 = g
        .div_sym(&extr.chibarhat)
        .sub(&grid.grad(&extr.trchibar).scale(0.5))
        .sub(&g.contract_covector(&extr.chibarhat, &extr.zeta))
        .add(&extr.zeta.weighted(&extr.trchibar).scale(0.5));
    GaussCodazziResiduals {
        gauss1,
        gauss2,
        codazzi1,
        codazzi2,
    }
}

/// Embeds `h`, builds the `∂_v` null frame and the extrinsic package.
pub fn cone_surface<'g>(
    grid: &'g SphereGrid,
    h: &ScalarField,
) -> Result<(EmbeddedSurface<'g>, ExtrinsicData<'g>)> {
    let surface = embed(grid, h);
    let frame = null_frame(&surface)?;
    let extr = extrinsic_package(&surface, &frame);
    Ok((surface, extr))
}
