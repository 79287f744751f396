//! Boost rescalings `{L, L̄} ↦ {aL, a⁻¹L̄}` of the null frame.
//!
//! Under a boost `χ` has weight `+1`, `χ̄` weight `-1`, and the torsion shifts
//! by an exact form, `ζ_a = ζ - d log a`. On a cone graph the torsion in the
//! `∂_v` frame is closed, so a Poisson solve removes it completely; a further
//! constant boost makes `trχ ≡ 1`, after which the second Codazzi equation
//! collapses to the integrability condition `dK = -½ div χ̂̄`.

use crate::conformal::ConformalMetric;
use crate::lightcone::{AmbientVectorField, ExtrinsicData};
use crate::sphere::{CovectorField, ScalarField, SymTensorField};
use crate::{Error, Result};

/// Torsion bound required before normalizing `trχ`.
pub const TORSION_TOL: f64 = 1e-8;
/// Allowed spread of `trχ` before it counts as constant.
pub const TRCHI_CONSTANT_TOL: f64 = 1e-6;

/// A positive boost parameter `a`, stored through `log a`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeFunction {
    log_a: ScalarField,
}

impl GaugeFunction {
    pub fn from_log(log_a: ScalarField) -> Self {
        assert!(log_a.is_finite(), "log a must be finite");
        Self { log_a }
    }

    pub fn from_values(a: &ScalarField) -> Result<Self> {
        let min = a.min();
        if min.is_nan() || min <= 0.0 || !a.is_finite() {
            return Err(Error::NonPositiveGauge { min });
        }
        Ok(Self::from_log(a.map(f64::ln)))
    }

    pub fn constant(like: &ScalarField, a: f64) -> Result<Self> {
        Self::from_values(&like.constant_like(a))
    }

    pub fn log_a(&self) -> &ScalarField {
        &self.log_a
    }

    pub fn values(&self) -> ScalarField {
        self.log_a.exp()
    }

    /// The boost `ab` (boosts compose by multiplication).
    pub fn compose(&self, other: &Self) -> Self {
        Self::from_log(&self.log_a + &other.log_a)
    }
}

/// Applies the boost algebraically to an extrinsic package.
pub fn rescale_frame<'g>(extr: &ExtrinsicData<'g>, a: &GaugeFunction) -> ExtrinsicData<'g> {
    let grid = extr.metric.grid();
    let up = a.values();
    let down = a.log_a().map(|v| (-v).exp());
    ExtrinsicData {
        metric: extr.metric.clone(),
        l: extr.l.weighted(&up),
        lbar: extr.lbar.weighted(&down),
        chi: extr.chi.weighted(&up),
        chibar: extr.chibar.weighted(&down),
        trchi: &extr.trchi * &up,
        trchibar: &extr.trchibar * &down,
        chihat: extr.chihat.weighted(&up),
        chibarhat: extr.chibarhat.weighted(&down),
        zeta: extr.zeta.sub(&grid.grad(a.log_a())),
    }
}

/// `max |curl ζ_a - curl ζ|` in the induced metric.
pub fn curl_invariance_check(extr: &ExtrinsicData<'_>, a: &GaugeFunction) -> f64 {
    let g = &extr.metric;
    let before = g.curl(&extr.zeta);
    let after = g.curl(&rescale_frame(extr, a).zeta);
    (&after - &before).max_abs()
}

/// The zero-mean `log a` solving `Δ log a = div ζ`, so that `div ζ_a = 0`.
///
/// In two dimensions `div_g = e^{-2h} div` on 1-forms and `Δ_g = e^{-2h} Δ`, so
/// the conformal weights cancel and the problem is a round Poisson equation.
pub fn divergence_free_gauge(extr: &ExtrinsicData<'_>) -> Result<GaugeFunction> {
    let grid = extr.metric.grid();
    let log_a = grid.poisson_solve(&grid.div(&extr.zeta))?;
    Ok(GaugeFunction::from_log(log_a))
}

/// A frame boosted by a constant so that `trχ ≡ 1`.
#[derive(Debug, Clone)]
pub struct NormalizedFrame<'g> {
    pub data: ExtrinsicData<'g>,
    /// The constant boost `c = ∫dvol / ∫trχ dvol` that was applied.
    pub scale: f64,
}

pub fn normalize_trchi<'g>(extr: &ExtrinsicData<'g>) -> Result<NormalizedFrame<'g>> {
    let norm = extr.zeta.max_norm();
    if norm > TORSION_TOL {
        return Err(Error::TorsionNotZero {
            norm,
            tolerance: TORSION_TOL,
        });
    }
    let g = &extr.metric;
    let mean = g.integrate(&extr.trchi) / g.area();
    let deviation = (&extr.trchi - mean).max_abs();
    if deviation > TRCHI_CONSTANT_TOL {
        return Err(Error::TrChiNotConstant {
            deviation,
            tolerance: TRCHI_CONSTANT_TOL,
        });
    }
    let scale = 1.0 / mean;
    let a = GaugeFunction::constant(&extr.trchi, scale)?;
    Ok(NormalizedFrame {
        data: rescale_frame(extr, &a),
        scale,
    })
}

/// The full pipeline from the `∂_v` frame: divergence-free boost, then the
/// constant boost to `trχ ≡ 1`.
#[derive(Debug, Clone)]
pub struct GaugedFrame<'g> {
    /// Boost `a` removing the torsion.
    pub gauge: GaugeFunction,
    /// Boost after which `div ζ_a = 0` (and hence `ζ_a = 0`).
    pub divergence_free: ExtrinsicData<'g>,
    pub normalized: NormalizedFrame<'g>,
}

pub fn gauge_fix<'g>(extr: &ExtrinsicData<'g>) -> Result<GaugedFrame<'g>> {
    let gauge = divergence_free_gauge(extr)?;
    let divergence_free = rescale_frame(extr, &gauge);
    let normalized = normalize_trchi(&divergence_free)?;
    Ok(GaugedFrame {
        gauge,
        divergence_free,
        normalized,
    })
}

/// `dK + ½ div χ̂̄` in the normalized gauge.
pub fn integrability_residual(extr: &ExtrinsicData<'_>) -> CovectorField {
    let g = &extr.metric;
    let dk = g.grid().grad(&g.gauss_curvature());
    dk.add(&g.div_sym(&extr.chibarhat).scale(0.5))
}

/// Second Codazzi equation with `ζ = 0`, `trχ ≡ 1` and `trχ̄ = -4K` substituted:
/// `div χ̂̄ + 2 dK`, which is twice [`integrability_residual`].
pub fn reduced_codazzi2(extr: &ExtrinsicData<'_>) -> CovectorField {
    let g = &extr.metric;
    let trchibar = g.gauss_curvature().scale(-4.0);
    g.div_sym(&extr.chibarhat)
        .sub(&g.grid().grad(&trchibar).scale(0.5))
}

/// The two sides of `∫⟨div ξ, ω⟩ = ∫⟨ξ, -½ (L_{ω♯} g)^⁰⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdjointPair {
    pub divergence_side: f64,
    pub deformation_side: f64,
    /// `∫ |div ξ|_g |ω|_g dvol_g`, the natural size of either side.
    pub scale: f64,
}

impl AdjointPair {
    pub fn relative_gap(&self) -> f64 {
        let gap = (self.divergence_side - self.deformation_side).abs();
        if self.scale > 0.0 {
            gap / self.scale
        } else {
            gap
        }
    }
}

/// `L_{ω♯} g = sym ∇ω`, trace-free part, times `-½`.
pub fn adjoint_of_div(metric: &ConformalMetric<'_>, w: &CovectorField) -> SymTensorField {
    metric
        .covariant_derivative(w)
        .sym()
        .trace_free()
        .scale(-0.5)
}

pub fn adjoint_identity_check(
    xi: &SymTensorField,
    w: &CovectorField,
    metric: &ConformalMetric<'_>,
) -> Result<AdjointPair> {
    let trace = xi.max_trace();
    if !xi.is_traceless() && trace > 1e-12 * xi.max_abs() {
        return Err(Error::NotTraceFree { trace });
    }
    let div = metric.div_sym(xi);
    let divergence_side = metric.integrate(&metric.inner_covectors(&div, w));
    let deformation_side = metric.integrate(&metric.inner_tensors(xi, &adjoint_of_div(metric, w)));
    let pointwise = metric
        .inner_covectors(&div, &div)
        .zip_map(&metric.inner_covectors(w, w), |a, b| (a * b).sqrt());
    Ok(AdjointPair {
        divergence_side,
        deformation_side,
        scale: metric.integrate(&pointwise),
    })
}

/// Boost of a null frame by `a`, as ambient vectors (for recomputing the
/// extrinsic package from scratch).
pub fn boosted_frame(
    l: &AmbientVectorField,
    lbar: &AmbientVectorField,
    a: &GaugeFunction,
) -> crate::lightcone::NullFrame {
    let up = a.values();
    let down = a.log_a().map(|v| (-v).exp());
    crate::lightcone::NullFrame::new(l.weighted(&up), lbar.weighted(&down))
}
