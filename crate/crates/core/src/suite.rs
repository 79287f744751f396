//! Verification suites and convergence studies over the library.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::conformal::{ckv_fields, rotation_fields, ConformalMetric};
use crate::function_spec::FunctionSpec;
use crate::gauge::{
    adjoint_identity_check, boosted_frame, curl_invariance_check, gauge_fix,
    integrability_residual, reduced_codazzi2, rescale_frame, GaugeFunction,
};
use crate::kazdan_warner::{kw_integral, kw_integral_general, kw_integral_unchecked, proof_chain};
use crate::lightcone::{
    embed, extrinsic_package, frame_defects, gauss_codazzi_residuals, null_frame, ExtrinsicData,
};
use crate::seeded::{random_conformal_killing, random_covector, random_scalar, random_traceless};
use crate::sphere::{ScalarField, SphereGrid, VectorField};
use crate::tolerances::Tolerances;
use crate::{Error, Result};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    SpectralCore,
    Conformal,
    Kw,
    Embed,
    Gauge,
    Chain,
    Adjoint,
    All,
}

impl Suite {
    pub const NAMES: [&'static str; 8] = [
        "spectral-core",
        "conformal",
        "kw",
        "embed",
        "gauge",
        "chain",
        "adjoint",
        "all",
    ];

    fn parts(self) -> Vec<Suite> {
        use Suite::*;
        match self {
            All => vec![SpectralCore, Conformal, Kw, Embed, Gauge, Chain, Adjoint],
            s => vec![s],
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        use Suite::*;
        Ok(match s {
            "spectral-core" => SpectralCore,
            "conformal" => Conformal,
            "kw" => Kw,
            "embed" => Embed,
            "gauge" => Gauge,
            "chain" => Chain,
            "adjoint" => Adjoint,
            "all" => All,
            other => return Err(Error::UnknownSuite(other.to_string())),
        })
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let i = match self {
            Suite::SpectralCore => 0,
            Suite::Conformal => 1,
            Suite::Kw => 2,
            Suite::Embed => 3,
            Suite::Gauge => 4,
            Suite::Chain => 5,
            Suite::Adjoint => 6,
            Suite::All => 7,
        };
        f.write_str(Self::NAMES[i])
    }
}

/// What a suite runs on.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteInput {
    /// Conformal exponent of the intrinsic metric.
    pub f: FunctionSpec,
    /// Embedding exponent; `None` means the same as `f`.
    pub h: Option<FunctionSpec>,
    pub band_limit: usize,
    /// Seed for auxiliary random objects (boosts, test tensors, field combinations).
    pub seed: u64,
}

impl SuiteInput {
    pub fn new(f: FunctionSpec, band_limit: usize) -> Self {
        Self {
            f,
            h: None,
            band_limit,
            seed: 0,
        }
    }

    pub fn h(&self) -> &FunctionSpec {
        self.h.as_ref().unwrap_or(&self.f)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputEcho {
    pub f: String,
    pub h: String,
    pub seed: u64,
    pub tolerances: Tolerances,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema_version: u32,
    pub suite: String,
    pub band_limit: usize,
    pub input: InputEcho,
    pub checks: Vec<Check>,
    /// Informative values that do not decide the outcome.
    pub diagnostics: BTreeMap<String, f64>,
    pub passed: bool,
    pub wall_time_s: f64,
    pub tool_version: String,
}

struct Recorder<'t> {
    tol: &'t Tolerances,
    checks: Vec<Check>,
    diagnostics: BTreeMap<String, f64>,
}

impl Recorder<'_> {
    fn check(&mut self, name: impl Into<String>, tol_name: &str, value: f64) -> Result<()> {
        let tolerance = self.tol.get(tol_name)?;
        self.checks.push(Check {
            name: name.into(),
            value,
            tolerance,
            pass: value <= tolerance,
        });
        Ok(())
    }

    fn note(&mut self, name: impl Into<String>, value: f64) {
        self.diagnostics.insert(name.into(), value);
    }
}

/// Fields shared by the suites of one run.
struct Context<'g> {
    grid: &'g SphereGrid,
    f: ScalarField,
    h: ScalarField,
    seed: u64,
}

impl<'g> Context<'g> {
    fn surface(
        &self,
    ) -> Result<(
        crate::lightcone::EmbeddedSurface<'g>,
        crate::lightcone::NullFrame,
        ExtrinsicData<'g>,
    )> {
        let s = embed(self.grid, &self.h);
        let frame = null_frame(&s)?;
        let e = extrinsic_package(&s, &frame);
        Ok((s, frame, e))
    }

    fn boost(&self, stream: u64) -> GaugeFunction {
        GaugeFunction::from_log(random_scalar(
            self.grid,
            self.seed.wrapping_mul(31).wrapping_add(stream),
            4,
            0.3,
        ))
    }
}

fn spectral_core(cx: &Context<'_>, r: &mut Recorder<'_>) -> Result<()> {
    let grid = cx.grid;
    let four_pi = 4.0 * std::f64::consts::PI;
    let area = grid.integrate(&grid.field_from_nodes(|_| 1.0));
    r.check("area", "area", (area - four_pi).abs() / four_pi)?;

    let round_trip = grid.synthesize(&grid.analyze(&cx.f))?;
    r.check("roundtrip", "roundtrip", (&round_trip - &cx.f).max_abs())?;

    let mut eigen: f64 = 0.0;
    for l in 1..=grid.band_limit() / 2 {
        let ev = (l * (l + 1)) as f64;
        for m in -(l as i64)..=l as i64 {
            let y = grid.ylm(l, m)?;
            let err = (&grid.laplacian(&y) + &y.scale(ev)).max_abs() / (ev * y.max_abs());
            eigen = eigen.max(err);
        }
    }
    r.check("laplacian_eigenvalues", "eigen", eigen)?;

    let mean = grid.integrate(&cx.f) / four_pi;
    let u = &cx.f - mean;
    let back = grid.poisson_solve(&grid.laplacian(&u))?;
    r.check("poisson_roundtrip", "poisson", (&back - &u).max_abs())
}

fn conformal(cx: &Context<'_>, r: &mut Recorder<'_>) -> Result<()> {
    let g = ConformalMetric::new(cx.grid, cx.f.clone());
    let total = g.integrate(&g.gauss_curvature());
    r.check(
        "gauss_bonnet",
        "gauss_bonnet",
        (total - 4.0 * std::f64::consts::PI).abs(),
    )?;
    let ckv = ckv_fields(cx.grid)
        .iter()
        .chain(rotation_fields(cx.grid).iter())
        .map(|x| g.conformal_killing_defect(x))
        .fold(0.0, f64::max);
    r.check("ckv_residual", "ckv", ckv)?;
    r.note("area_g", g.area());
    Ok(())
}

fn grad_x3_squared(grid: &SphereGrid) -> VectorField {
    let x3 = grid.coordinate(2);
    grid.grad(&(&x3 * &x3)).sharp()
}

fn kw(cx: &Context<'_>, r: &mut Recorder<'_>) -> Result<()> {
    for i in 1..=3 {
        let rep = kw_integral(cx.grid, &cx.f, i)?;
        r.note(format!("kw_x{i}_value"), rep.integral_value);
        r.note(format!("kw_x{i}_normalization"), rep.normalization);
        r.check(format!("kw_x{i}"), "kw", rep.relative())?;
    }
    let x = random_conformal_killing(cx.grid, cx.seed);
    let rep = kw_integral_general(cx.grid, &cx.f, &x)?;
    r.check("kw_seeded_ckv", "kw", rep.relative())?;
    let neg = kw_integral_unchecked(cx.grid, &cx.f, &grad_x3_squared(cx.grid));
    r.note("negative_control_relative", neg.relative());
    Ok(())
}

fn embed_suite(cx: &Context<'_>, r: &mut Recorder<'_>) -> Result<()> {
    let (s, frame, e) = cx.surface()?;
    r.check("induced_metric", "induced_metric", s.induced_metric_error())?;
    r.check("cone_constraint", "cone", s.cone_defect())?;
    r.check("null_frame", "frame", frame_defects(&s, &frame).max())?;
    r.check("chihat", "chihat", e.chihat.max_abs())?;
    let expected = cx.h.map(|v| 2.0 * (-v).exp());
    r.check("trchi", "trchi", (&e.trchi - &expected).max_abs())?;
    r.check("zeta", "zeta", e.zeta.sub(&cx.grid.grad(&cx.h)).max_norm())?;
    let names = ["gauss1", "gauss2", "codazzi1", "codazzi2"];
    for (name, v) in names.iter().zip(gauss_codazzi_residuals(&e).max_norms()) {
        r.check(*name, "gauss_codazzi", v)?;
    }
    Ok(())
}

fn package_gap(a: &ExtrinsicData<'_>, b: &ExtrinsicData<'_>) -> f64 {
    [
        a.chi.sub(&b.chi).max_abs(),
        a.chibar.sub(&b.chibar).max_abs(),
        (&a.trchi - &b.trchi).max_abs(),
        (&a.trchibar - &b.trchibar).max_abs(),
        a.zeta.sub(&b.zeta).max_norm(),
    ]
    .into_iter()
    .fold(0.0, f64::max)
}

fn trchi_spread(e: &ExtrinsicData<'_>) -> f64 {
    let g = &e.metric;
    let mean = g.integrate(&e.trchi) / g.area();
    let var = g.integrate(&(&e.trchi - mean).map(|v| v * v)) / g.area();
    var.sqrt().max((mean - 1.0).abs())
}

fn gauge(cx: &Context<'_>, r: &mut Recorder<'_>) -> Result<()> {
    let (s, frame, e) = cx.surface()?;
    let (a, b) = (cx.boost(1), cx.boost(2));
    let recomputed = extrinsic_package(&s, &boosted_frame(&frame.l, &frame.lbar, &a));
    r.check(
        "transformation_law",
        "transform",
        package_gap(&rescale_frame(&e, &a), &recomputed),
    )?;
    r.check("curl_invariance", "curl", curl_invariance_check(&e, &a))?;
    let twice = rescale_frame(&rescale_frame(&e, &a), &b);
    r.check(
        "group_law",
        "group",
        package_gap(&twice, &rescale_frame(&e, &a.compose(&b))),
    )?;

    let fixed = gauge_fix(&e)?;
    let n = &fixed.normalized.data;
    r.check(
        "torsion_after_gauge",
        "torsion",
        fixed.divergence_free.zeta.max_norm(),
    )?;
    r.check("trchi_normalized", "trchi_std", trchi_spread(n))?;
    let res = integrability_residual(n);
    r.check("integrability", "integrability", res.max_norm())?;
    r.note("normalization_scale", fixed.normalized.scale);
    r.note(
        "integrability_vs_reduced_codazzi2",
        reduced_codazzi2(n).scale(0.5).sub(&res).max_norm(),
    );
    Ok(())
}

fn chain(cx: &Context<'_>, r: &mut Recorder<'_>) -> Result<()> {
    let mut fields: Vec<VectorField> = ckv_fields(cx.grid).to_vec();
    fields.push(random_conformal_killing(cx.grid, cx.seed));
    let (mut gap, mut iso, mut last): (f64, f64, f64) = (0.0, 0.0, 0.0);
    for (k, x) in fields.iter().enumerate() {
        let c = proof_chain(cx.grid, &cx.h, x)?;
        gap = gap.max(c.max_gap() / c.normalization.max(1.0));
        iso = iso.max(c.isometry_gap());
        last = last.max(c.lines[5].abs());
        if k == 0 {
            for (i, v) in c.lines.iter().enumerate() {
                r.note(format!("chain_x1_line{}", i + 1), *v);
            }
            r.note("chain_x1_codazzi1_substep", c.codazzi1_substep);
        }
    }
    r.check("chain_agreement", "chain", gap)?;
    r.check("chain_isometry", "isometry", iso)?;
    r.checks.push(Check {
        name: "chain_last_line".into(),
        value: last,
        tolerance: 0.0,
        pass: last == 0.0,
    });
    Ok(())
}

fn adjoint(cx: &Context<'_>, r: &mut Recorder<'_>) -> Result<()> {
    let s = embed(cx.grid, &cx.h);
    let g = s.metric();
    let xi = random_traceless(cx.grid, cx.seed, 5, 1.0);
    let w = random_covector(cx.grid, cx.seed.wrapping_add(1), 5, 1.0);
    let p = adjoint_identity_check(&xi, &w, g)?;
    r.check("adjoint_gap", "adjoint", p.relative_gap())?;
    let mut kernel: f64 = 0.0;
    for x in ckv_fields(cx.grid)
        .iter()
        .chain(rotation_fields(cx.grid).iter())
    {
        let p = adjoint_identity_check(&xi, &g.flat(x), g)?;
        kernel = kernel.max(p.deformation_side.abs() / p.scale.max(f64::MIN_POSITIVE));
    }
    r.check("adjoint_kernel", "adjoint", kernel)
}

/// Runs `suite` and collects its checks. Library errors (bad input, violated
/// preconditions) are returned as `Err`; failed checks are recorded in the report.
pub fn run_suite(suite: Suite, input: &SuiteInput, tol: &Tolerances) -> Result<SuiteReport> {
    let start = Instant::now();
    let grid = SphereGrid::new(input.band_limit)?;
    let cx = Context {
        grid: &grid,
        f: input.f.to_field(&grid)?,
        h: input.h().to_field(&grid)?,
        seed: input.seed,
    };
    let mut r = Recorder {
        tol,
        checks: Vec::new(),
        diagnostics: BTreeMap::new(),
    };
    for part in suite.parts() {
        log::info!("running {part} at L = {}", input.band_limit);
        match part {
            Suite::SpectralCore => spectral_core(&cx, &mut r)?,
            Suite::Conformal => conformal(&cx, &mut r)?,
            Suite::Kw => kw(&cx, &mut r)?,
            Suite::Embed => embed_suite(&cx, &mut r)?,
            Suite::Gauge => gauge(&cx, &mut r)?,
            Suite::Chain => chain(&cx, &mut r)?,
            Suite::Adjoint => adjoint(&cx, &mut r)?,
            Suite::All => unreachable!(),
        }
    }
    let passed = r.checks.iter().all(|c| c.pass);
    Ok(SuiteReport {
        schema_version: SCHEMA_VERSION,
        suite: suite.to_string(),
        band_limit: input.band_limit,
        input: InputEcho {
            f: input.f.to_string(),
            h: input.h().to_string(),
            seed: input.seed,
            tolerances: tol.clone(),
        },
        checks: r.checks,
        diagnostics: r.diagnostics,
        passed,
        wall_time_s: start.elapsed().as_secs_f64(),
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
    })
}

/// One row per band limit, one column per residual.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub columns: Vec<String>,
    pub rows: Vec<ConvergenceRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub band_limit: usize,
    pub values: Vec<f64>,
}

pub const CONVERGENCE_COLUMNS: [&str; 8] = [
    "kw",
    "gauss1",
    "gauss2",
    "codazzi1",
    "codazzi2",
    "integrability",
    "chain_gap",
    "adjoint_gap",
];

impl ConvergenceTable {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r.values[k]).collect())
    }
}

fn convergence_row(input: &SuiteInput, band: usize) -> Result<Vec<f64>> {
    let grid = SphereGrid::new(band)?;
    let f = input.f.to_field(&grid)?;
    let h = input.h().to_field(&grid)?;
    let kw = (1..=3)
        .map(|i| kw_integral(&grid, &f, i).map(|r| r.integral_value.abs()))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let s = embed(&grid, &h);
    let e = extrinsic_package(&s, &null_frame(&s)?);
    let gc = gauss_codazzi_residuals(&e).max_norms();
    let fixed = gauge_fix(&e)?;
    let integrability = integrability_residual(&fixed.normalized.data).max_norm();
    let mut chain_gap: f64 = 0.0;
    for x in ckv_fields(&grid) {
        chain_gap = chain_gap.max(proof_chain(&grid, &h, &x)?.max_gap());
    }
    let xi = random_traceless(&grid, input.seed, 5, 1.0);
    let w = random_covector(&grid, input.seed.wrapping_add(1), 5, 1.0);
    let p = adjoint_identity_check(&xi, &w, s.metric())?;
    let adjoint_gap = (p.divergence_side - p.deformation_side).abs();
    Ok(vec![
        kw,
        gc[0],
        gc[1],
        gc[2],
        gc[3],
        integrability,
        chain_gap,
        adjoint_gap,
    ])
}

/// Every residual at each band limit of `bands`, which must ascend from 8.
pub fn convergence_study(input: &SuiteInput, bands: &[usize]) -> Result<ConvergenceTable> {
    if bands.is_empty() {
        return Err(Error::BandLimits("empty list".into()));
    }
    if bands[0] < 8 || bands.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::BandLimits(format!(
            "{bands:?} must ascend, starting at 8 or more"
        )));
    }
    let rows = bands
        .iter()
        .map(|&band| {
            log::info!("convergence row at L = {band}");
            Ok(ConvergenceRow {
                band_limit: band,
                values: convergence_row(input, band)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConvergenceTable {
        columns: CONVERGENCE_COLUMNS.iter().map(|s| s.to_string()).collect(),
        rows,
    })
}
