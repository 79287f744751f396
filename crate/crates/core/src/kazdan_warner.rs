//! Kazdan–Warner integrals `∫⟨∇K_g, X⟩_g dvol_g` for conformal Killing `X`, and
//! a line-by-line replay of their vanishing on the lightcone embedding.

use serde::{Deserialize, Serialize};

use crate::conformal::{ckv_fields, ConformalMetric, CONFORMAL_KILLING_TOL};
use crate::lightcone::{cone_surface, ExtrinsicData};
use crate::sphere::{ScalarField, SphereGrid, SymTensorField, Tensor2Field, VectorField};
use crate::{Error, Result};

/// Default relative tolerance for a single integral.
pub const KW_TOL: f64 = 1e-8;
/// Default relative tolerance for agreement between chain lines.
pub const CHAIN_TOL: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KWReport {
    pub integral_value: f64,
    /// `∫ |∇K|_g |X|_g dvol_g`.
    pub normalization: f64,
    pub band_limit: usize,
    pub tolerance: f64,
    pub passed: bool,
    pub chain_values: Option<Vec<f64>>,
}

impl KWReport {
    fn new(integral_value: f64, normalization: f64, band_limit: usize, tolerance: f64) -> Self {
        Self {
            integral_value,
            normalization,
            band_limit,
            tolerance,
            passed: integral_value.abs() <= tolerance * normalization.max(1.0),
            chain_values: None,
        }
    }

    /// `|I| / max(normalization, 1)`.
    pub fn relative(&self) -> f64 {
        self.integral_value.abs() / self.normalization.max(1.0)
    }
}

/// `(∫ dK(X) dvol_g, ∫ |dK|_g |X|_g dvol_g)`.
fn pairing(metric: &ConformalMetric<'_>, x: &VectorField) -> (f64, f64) {
    let dk = metric.grid().grad(&metric.gauss_curvature());
    let value = metric.integrate(&dk.apply(x));
    let size = dk.norm().zip_map(&x.norm(), |a, b| a * b);
    // |dK|_g |X|_g = e^{-f}|dK| e^{f}|X|, so the round norms suffice.
    (value, metric.integrate(&size))
}

/// `∫⟨∇K_g, ∇x_i⟩ dvol_g` for `g = e^{2f} g_{S²}` and axis `i ∈ {1, 2, 3}`.
pub fn kw_integral(grid: &SphereGrid, f: &ScalarField, axis: usize) -> Result<KWReport> {
    if !(1..=3).contains(&axis) {
        return Err(Error::AxisOutOfRange(axis));
    }
    let x = &ckv_fields(grid)[axis - 1];
    Ok(kw_integral_unchecked(grid, f, x))
}

/// `∫⟨∇̃K_g, X⟩_g dvol_g`, rejecting `X` that is not conformal Killing.
pub fn kw_integral_general(
    grid: &SphereGrid,
    f: &ScalarField,
    x: &VectorField,
) -> Result<KWReport> {
    let metric = ConformalMetric::new(grid, f.clone());
    let residual = metric.conformal_killing_defect(x);
    if residual > CONFORMAL_KILLING_TOL {
        return Err(Error::NotConformalKilling {
            residual,
            tolerance: CONFORMAL_KILLING_TOL,
        });
    }
    Ok(kw_integral_unchecked(grid, f, x))
}

/// The same integral with no precondition on `X`, for negative controls.
pub fn kw_integral_unchecked(grid: &SphereGrid, f: &ScalarField, x: &VectorField) -> KWReport {
    let metric = ConformalMetric::new(grid, f.clone());
    let (value, norm) = pairing(&metric, x);
    KWReport::new(value, norm, grid.band_limit(), KW_TOL)
}

/// The six lines of the chain, evaluated on the cone graph `S_h` in the `∂_v` frame.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProofChain {
    /// 1. `∫⟨∇K, X⟩`, with `K` and `dvol` from the ambient induced metric
    /// 2. `-¼∫⟨∇(trχ trχ̄), X⟩`
    /// 3. `-½∫{trχ (div χ̂̄)(X) - χ̂̄(trχ ζ, X)}`
    /// 4. `½∫{trχ ⟨χ̂̄, ∇X⟩ + χ̂̄(∇trχ + trχ ζ, X)}`
    /// 5. `¼∫ trχ ⟨χ̂̄, sym ∇X⟩`
    /// 6. `¼∫ trχ ⟨χ̂̄, Ω g⟩`
    pub lines: [f64; 6],
    /// Line 3 with only the first Codazzi equation substituted:
    /// `-¼∫⟨-trχ̄ trχ ζ + trχ ∇trχ̄, X⟩`.
    pub codazzi1_substep: f64,
    /// The intrinsic integral on `(S², e^{2h} g_{S²})`.
    pub intrinsic: f64,
    pub normalization: f64,
}

impl ProofChain {
    /// Largest difference between any two lines (including the substep).
    pub fn max_gap(&self) -> f64 {
        let all: Vec<f64> = self
            .lines
            .iter()
            .copied()
            .chain(std::iter::once(self.codazzi1_substep))
            .collect();
        let hi = all.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let lo = all.iter().copied().fold(f64::INFINITY, f64::min);
        hi - lo
    }

    /// `|line 1 - intrinsic|`.
    pub fn isometry_gap(&self) -> f64 {
        (self.lines[0] - self.intrinsic).abs()
    }
}

/// `⟨S, T⟩_g` for symmetric `S` and general `T`.
fn pair_general(metric: &ConformalMetric<'_>, s: &SymTensorField, t: &Tensor2Field) -> ScalarField {
    let w = metric.exponent().map(|f| (-4.0 * f).exp());
    let sum = &(&(&s.t11 * &t.t11) + &(&s.t22 * &t.t22)) + &(&s.t12 * &(&t.t12 + &t.t21));
    &sum * &w
}

fn chain_on(extr: &ExtrinsicData<'_>, measured: &ConformalMetric<'_>, x: &VectorField) -> [f64; 7] {
    let g = &extr.metric;
    let grid = g.grid();
    let (trchi, trchibar, zeta, chb) = (&extr.trchi, &extr.trchibar, &extr.zeta, &extr.chibarhat);
    let xflat = g.flat(x);
    let dtrchi = grid.grad(trchi);
    let dtrchibar = grid.grad(trchibar);

    let line1 = measured.integrate(&measured.grid().grad(&measured.gauss_curvature()).apply(x));
    let line2 = -0.25 * g.integrate(&grid.grad(&(trchi * trchibar)).apply(x));
    let sub3a = -0.25
        * g.integrate(
            &zeta
                .weighted(&(trchibar * trchi))
                .scale(-1.0)
                .add(&dtrchibar.weighted(trchi))
                .apply(x),
        );
    let chb_zeta = g.contract_covector(chb, &zeta.weighted(trchi));
    let line3 = -0.5 * g.integrate(&(&(trchi * &g.div_sym(chb).apply(x)) - &chb_zeta.apply(x)));
    let nabla_x = g.covariant_derivative(&xflat);
    let mixed = g.contract_covector(chb, &dtrchi.add(&zeta.weighted(trchi)));
    let line4 = 0.5 * g.integrate(&(&(trchi * &pair_general(g, chb, &nabla_x)) + &mixed.apply(x)));
    let line5 = 0.25 * g.integrate(&(trchi * &g.inner_tensors(chb, &nabla_x.sym())));
    // Ω = ½ tr_g L_X g; equal to the conformal factor when X is conformal Killing.
    let omega = g.div_vector(x);
    let omega_g = SymTensorField::metric(&(&omega * g.density()));
    let line6 = 0.25 * g.integrate(&(trchi * &g.inner_tensors(chb, &omega_g)));
    [line1, line2, line3, line4, line5, line6, sub3a]
}

/// Replays the chain for `X` on the cone graph of `h`. Lines 1 to 5 agree for
/// any `X`; line 5 equals line 6 only for conformal Killing `X`.
pub fn proof_chain(grid: &SphereGrid, h: &ScalarField, x: &VectorField) -> Result<ProofChain> {
    let (surface, extr) = cone_surface(grid, h)?;
    // The induced metric as measured in Minkowski space: det γ = e^{4h}.
    let gamma = surface.induced_metric();
    let det = &(&gamma.t11 * &gamma.t22) - &(&gamma.t12 * &gamma.t12);
    let measured = ConformalMetric::new(grid, det.map(|d| 0.25 * d.ln()));
    let v = chain_on(&extr, &measured, x);
    let intrinsic = kw_integral_unchecked(grid, h, x);
    Ok(ProofChain {
        lines: [v[0], v[1], v[2], v[3], v[4], v[5]],
        codazzi1_substep: v[6],
        intrinsic: intrinsic.integral_value,
        normalization: intrinsic.normalization,
    })
}

/// [`proof_chain`] folded into a report: passes when every line agrees within
/// `tol · max(normalization, 1)` and the last line vanishes identically.
pub fn verify_proof_chain(
    grid: &SphereGrid,
    h: &ScalarField,
    x: &VectorField,
    tol: f64,
) -> Result<KWReport> {
    let metric = ConformalMetric::new(grid, h.clone());
    let residual = metric.conformal_killing_defect(x);
    if residual > CONFORMAL_KILLING_TOL {
        return Err(Error::NotConformalKilling {
            residual,
            tolerance: CONFORMAL_KILLING_TOL,
        });
    }
    let chain = proof_chain(grid, h, x)?;
    let mut report = KWReport::new(chain.lines[0], chain.normalization, grid.band_limit(), tol);
    report.passed = chain.max_gap() <= tol * chain.normalization.max(1.0) && chain.lines[5] == 0.0;
    report.chain_values = Some(chain.lines.to_vec());
    Ok(report)
}
